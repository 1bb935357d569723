"""Unit tests for dcck. Warnings are errors unless a test expects them."""
import pytest

pytestmark = pytest.mark.filterwarnings('error')
