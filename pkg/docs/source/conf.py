# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

from pycirl import __version__

# -- Project information -----------------------------------------------------

project = "pycirl"
copyright = "2025, pycirl developers"
author = "pycirl developers"
release = __version__

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.napoleon",
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "myst_nb",
    "sphinx_copybutton",
]

templates_path = ["_templates"]
exclude_patterns = ["Thumbs.db", ".DS_Store", "conf.py", "examples/configs"]

# example scripts are jupytext light scripts, rendered without execution
nb_custom_formats = {".py": ["jupytext.reads", {"fmt": "py:light"}]}
nb_execution_mode = "off"

# -- Options for HTML output -------------------------------------------------

html_theme = "pydata_sphinx_theme"
html_title = f"pycirl {release}"

# Napoleon settings
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_include_init_with_doc = False
napoleon_include_special_with_doc = True
napoleon_use_param = True
napoleon_use_rtype = True
napoleon_attr_annotations = True

# autodoc configuration
autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
}
autodoc_typehints = "description"

# Auto summary
autosummary_generate = True
autosummary_ignore_module_all = False

# myst configuration
myst_enable_extensions = [
    "colon_fence",
    "dollarmath",
]
