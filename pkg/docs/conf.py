# -*- coding: utf-8 -*-
#
# Page-Quality documentation build configuration file.
#
# Only the values that differ from the sphinx defaults are set here.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))
from page_quality import __version__  # noqa

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'Page-Quality'
copyright = u'2026, Page-Quality developers'

# The short X.Y version.
version = __version__
# The full version, including alpha/beta/rc tags.
release = version

exclude_patterns = ['_build']
pygments_style = 'sphinx'

autodoc_member_order = 'bysource'

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'Page-Qualitydoc'

latex_documents = [
    ('index', 'Page-Quality.tex', u'Page-Quality Documentation',
     u'Page-Quality developers', 'manual'),
]

man_pages = [
    ('index', 'page-quality', u'Page-Quality Documentation',
     [u'Page-Quality developers'], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'sqlalchemy': ('https://docs.sqlalchemy.org/en/20', None),
}
