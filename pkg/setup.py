# coding: utf-8

"""
A Python toolkit for analysing RF propagation measurements
"""

import os
import re
import sys

from setuptools import setup


def readfile(filename):
    with open(filename, encoding="utf-8") as fp:
        filecontents = fp.read()
    return filecontents

VERSION_REGEX = re.compile("__version__ = \"(.*?)\"")
CONTENTS = readfile(os.path.join(
    os.path.dirname(os.path.abspath(__file__)),
    "rfpropy", "__init__.py"))

VERSION = VERSION_REGEX.findall(CONTENTS)[0]

# 'setup.py publish' shortcut for publishing (e.g. setup.py from requests https://github.com/requests/requests/blob/master/setup.py)
if sys.argv[-1] == 'publish':
    os.system('python setup.py sdist bdist_wheel')
    os.system('twine upload dist/*')
    sys.exit()

setup(name="rfpropy",
      version=VERSION,
      packages=["rfpropy"],
      license="MIT",
      description="A Python toolkit for analysing RF propagation measurements",
      long_description=\
          readfile(os.path.join(os.path.dirname(__file__), "README.md")),
      long_description_content_type="text/markdown",
      install_requires=\
          readfile(os.path.join(os.path.dirname(__file__), "requirements.txt")),
      extras_require={"plot": ["matplotlib"]},
      entry_points={"console_scripts": ["rfpropy = rfpropy.cli:main"]},
      python_requires=">=3.6",
      include_package_data=True,
      classifiers=[
          "Programming Language :: Python :: 3",
          "Programming Language :: Python :: 3.6",
          "Programming Language :: Python :: 3.7",
          "Programming Language :: Python :: 3.8"])
