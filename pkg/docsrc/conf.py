#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# RC-Utils documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

from rcutils import __version__


extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.intersphinx',
              'sphinx.ext.mathjax',
              'sphinx.ext.napoleon']

source_suffix = '.rst'
master_doc = 'index'

project = 'RC-Utils'
author = 'RC-Utils developers'
copyright = '2026, ' + author
version = release = __version__

pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
html_copy_source = False
htmlhelp_basename = 'RC-Utilsdoc'

# Google-style sections only.
napoleon_numpy_docstring = False

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None),
                       'scipy': ('https://docs.scipy.org/doc/scipy/', None),
                       'networkx': ('https://networkx.org/documentation/stable/', None)}
