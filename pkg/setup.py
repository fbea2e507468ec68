from setuptools import setup, find_packages
import os

here = os.path.abspath(os.path.dirname(__file__))

# Long description from the top-level README when present
long_description = ""
readme = os.path.join(here, "README.md")
if os.path.exists(readme):
    with open(readme, encoding="utf-8") as fh:
        long_description = fh.read()

setup(
    name="optocool",
    version="0.1.0",
    author="optocool developers",
    author_email="",
    url="",
    description="Ground-state cooling and squeezing in linearized cavity optomechanics",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "demo"]),
    zip_safe=False,
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "pandas>=1.5",
        "PyYAML>=6.0",
    ],
    extras_require={
        "test": [
            "pytest>=6.0",
            "hypothesis>=6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "optocool=optocool.cli:main",
        ],
    },
)
