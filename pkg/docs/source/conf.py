# -*- coding: utf-8 -*-
#
# rfpropy documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath('../..'))

import rfpropy

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon'
]

autodoc_default_options = {
    'members-order': 'groupwise',
    'show-inheritance': True}

# numpy, scipy and pandas objects in docstrings link to their own documentation
intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
    'pandas': ('https://pandas.pydata.org/docs', None),
    'astropy': ('https://docs.astropy.org/en/stable', None),
    'matplotlib': ('https://matplotlib.org/stable', None),
}

templates_path = ['_templates']
source_suffix = ['.rst']
source_encoding = 'utf-8-sig'
master_doc = 'index'

project = u'rfpropy'
author = u'rfpropy developers'
copyright = u'2026, ' + author

version = rfpropy.__version__
release = rfpropy.__version__

language = None
exclude_patterns = []
add_function_parentheses = True
add_module_names = False
pygments_style = 'sphinx'
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
html_use_index = False
html_show_sourcelink = True
htmlhelp_basename = 'rfpropydoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
    'papersize': 'a4paper',
    'pointsize': '10pt',
}

latex_documents = [
    (master_doc, 'rfpropy.tex', u'rfpropy Documentation', author, 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'rfpropy', u'rfpropy Documentation', [author], 1)
]
