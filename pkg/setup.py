from setuptools import setup, find_packages

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name="cftools",
    version="0.1.0",
    author="Henry Robbins",
    author_email="hwr26@cornell.edu",
    description="A Python package for homogenizing, balancing and flattening "
                "arithmetic circuits to depth 4.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(),
    include_package_data=True,
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=[
        'numpy>=1.19',
        'scipy>=1.6',
        'sympy>=1.8'
    ],
    extras_require= {
        "dev": ['pytest>=5',
                'mock>=3',
                'coverage>=4.5',
                'tox>=3',
                'hypothesis>=6']
    },
    entry_points={
        "console_scripts": ["cftools=cftools.cli:main"]
    },
    python_requires='>=3.8',
)
