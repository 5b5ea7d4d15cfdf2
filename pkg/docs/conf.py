# -*- coding: utf-8 -*-
#
# cylhardy documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.
#
# All configuration values have a default; values that are commented out
# serve to show the default.

import os
import sys

# Make the package importable for autodoc without installing it.
sys.path.insert(0, os.path.abspath(".."))

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.todo",
]

templates_path = ["_templates"]

# The suffix of source filenames.
source_suffix = ".rst"

# The master toctree document.
master_doc = "index"

# General information about the project.
project = "cylhardy"
copyright = "2024, Mausy5043"

# The short X.Y version.
version = "0.1"
# The full version, including alpha/beta/rc tags.
release = "0.1.0"

exclude_patterns = ["_build"]

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = "sphinx"

# -- Options for HTML output ----------------------------------------------

html_theme = "default"

html_static_path = ["_static"]

# Output file base name for HTML help builder.
htmlhelp_basename = "cylhardydoc"

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
    # The paper size ('letterpaper' or 'a4paper').
    #'papersize': 'a4paper',
}

latex_documents = [
    ("index", "cylhardy.tex", "cylhardy Documentation", "Mausy5043", "manual"),
]

# -- Options for manual page output ---------------------------------------

man_pages = [("index", "cylhardy", "cylhardy Documentation", ["Mausy5043"], 1)]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (
        "index",
        "cylhardy",
        "cylhardy Documentation",
        "Mausy5043",
        "cylhardy",
        "Numerical verification of critical cylindrical Hardy identities.",
        "Miscellaneous",
    ),
]
