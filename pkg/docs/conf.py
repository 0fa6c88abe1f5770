#!/usr/bin/env python
from __future__ import annotations

import os

import netefficacy


PROJ_DIR = os.path.abspath(os.path.join(__file__, '..', '..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autodoc.typehints',
    'autoapi.extension',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx_copybutton',  # adds a copy button to code blocks
]

# General information about the project.
project = 'netefficacy'
copyright = '2024, the netefficacy developers'
author = 'the netefficacy developers'

# The version info for the project you're documenting, acts as replacement
# for |version| and |release|.
release = netefficacy.__version__
version = '.'.join(release.split('.')[:2])

language = 'en'

# Autodoc
autoclass_content = 'both'
autodoc_typehints = 'description'
set_type_checking_flag = True
typehints_fully_qualified = False

# Autoapi
autoapi_type = 'python'
autoapi_dirs = [os.path.join(PROJ_DIR, 'netefficacy')]
autoapi_ignore = ['*/_version.py']
autoapi_keep_files = True
autoapi_add_toctree_entry = False
autoapi_python_class_content = 'both'
autoapi_options = [
    'members',
    'undoc-members',
    'show-inheritance',
    'show-module-summary',
    'imported-members',
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'Click': ('https://click.palletsprojects.com', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'networkx': ('https://networkx.org/documentation/stable', None),
}

source_suffix = '.rst'
master_doc = 'index'

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']


# -- Options for HTML output ---------------------------------------------------
html_title = f'netefficacy v{version}'
html_theme = 'furo'
pygments_style = 'default'

todo_include_todos = False

# -- Options for HTMLHelp output ---------------------------------------
htmlhelp_basename = 'netefficacydoc'
