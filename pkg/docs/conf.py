#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# dcck documentation build configuration file.

import os
import sys

# The project root holds the package; make it importable for autodoc.
cwd = os.getcwd()
project_root = os.path.dirname(cwd)
sys.path.insert(0, project_root)

import dcck  # noqa: E402

# -- General configuration ---------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.viewcode']
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'DCCK'
copyright = u"2026, DCCK Developers"

version = dcck.__version__
release = dcck.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output -------------------------------------------

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'dcckdoc'

# -- Options for manual page output ------------------------------------

man_pages = [
    ('index', 'dcck',
     u'DCCK Documentation',
     [u'DCCK Developers'], 1)
]
