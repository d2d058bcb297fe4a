"""Setup file for liemaps."""

import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

with open('requirements.txt') as fp:
    install_requires = fp.read()

setuptools.setup(
    name="liemaps",
    description="Truncated matrix Lie maps for polynomial ODE systems",
    entry_points = {
        'console_scripts': ['liemaps=liemaps:main'],
    },
    long_description=long_description,
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    package_data={"liemaps": ["resources/*.json", "resources/*.toml"]},
    install_requires=install_requires,
    python_requires='>=3.9'
)
