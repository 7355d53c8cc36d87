"""
Page-Quality
------------

Low-cost page quality features and a neural spam classifier for web pages.
"""

import os
import re
from setuptools import find_packages, setup


HERE = os.path.dirname(os.path.abspath(__file__))


def get_version():
    filename = os.path.join(HERE, 'page_quality', '__init__.py')
    with open(filename) as f:
        contents = f.read()
    pattern = r"^__version__ = '(.*?)'$"
    return re.search(pattern, contents, re.MULTILINE).group(1)


setup(
    name='Page-Quality',
    version=get_version(),
    license='BSD',
    description=(
        'Low-cost page quality features and a neural spam classifier.'
    ),
    packages=find_packages('.', exclude=['tests', 'tests.*']),
    package_data={'page_quality': ['data/*']},
    long_description=__doc__,
    zip_safe=False,
    include_package_data=True,
    platforms='any',
    python_requires='>=3.8',
    install_requires=[
        'beautifulsoup4>=4.9',
        'numpy>=1.17',
        'pandas>=1.5',
        'requests>=2.22',
        'SQLAlchemy>=1.4',
        'SQLAlchemy-Utils>=0.37'
    ],
    entry_points={
        'console_scripts': [
            'page-quality = page_quality.cli:run',
        ],
    },
    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Internet :: WWW/HTTP :: Indexing/Search',
        'Topic :: Software Development :: Libraries :: Python Modules'
    ]
)
