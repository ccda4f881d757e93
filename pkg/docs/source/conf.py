import os, sys

# Document the package from the source tree without installing it
sys.path.insert(0, os.path.abspath("../.."))

project = "hardylab"
copyright = "2024, hardylab developers"
author = "hardylab developers"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
]

# Docstrings use Google style sections and double backtick formulas
napoleon_google_docstring = True
napoleon_numpy_docstring = False
autodoc_member_order = "bysource"
autodoc_default_options = {
    "members": False,
    "undoc-members": False,
}

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "scipy": ("https://docs.scipy.org/doc/scipy", None),
    "sympy": ("https://docs.sympy.org/latest", None),
}

exclude_patterns = []

html_theme = "sphinx_book_theme"
html_theme_options = {
    "show_toc_level": 2,
}
html_title = "hardylab"
