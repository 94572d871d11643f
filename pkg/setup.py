#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import os.path
import re
import sys

import setuptools


# Read description and requirements.
with open("README.md", encoding="utf8") as f:
    readme = f.read()
with open("requirements.txt") as f:
    reqs = f.read()

# get version string from module
init_path = os.path.join(os.path.dirname(__file__), "quamr/__init__.py")
with open(init_path, "r") as f:
    version = re.search(r"__version__ = ['\"]([^'\"]*)['\"]", f.read(), re.M).group(1)

# Set key package information.
DISTNAME = "quamr"
DESCRIPTION = "quamr: rating the quality of AMR parses without a gold graph."
LONG_DESCRIPTION = readme
AUTHOR = "quamr contributors"
LICENSE = "MIT licensed, as found in the LICENSE file"
REQUIREMENTS = [line for line in reqs.strip().split("\n") if line and not line.startswith("#")]
VERSION = version

# Run installer.
if __name__ == "__main__":
    if sys.version_info < (3, 7):
        sys.exit("Sorry, Python >=3.7 is required for quamr.")

    setuptools.setup(
        name=DISTNAME,
        install_requires=REQUIREMENTS,
        packages=setuptools.find_packages(exclude=("test", "test.*")),
        entry_points={"console_scripts": ["quamr=quamr.cli:main"]},
        version=VERSION,
        description=DESCRIPTION,
        long_description=LONG_DESCRIPTION,
        long_description_content_type="text/markdown",
        author=AUTHOR,
        license=LICENSE,
        python_requires=">=3.7",
        tests_require=["pytest"],
    )
