from setuptools import setup, find_packages

setup(
    name="latnoether",
    version="0.1.0",
    description="Exact integral lattices, Tate cohomology and flabby resolutions for finite group actions",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(where="src", exclude=["tests", "tests.*"]),
    package_dir={"": "src"},
    package_data={"latnoether": ["fixtures/*.json"]},
    python_requires=">=3.9",
    install_requires=[
        "sympy>=1.12",
        "tabulate>=0.9.0",
    ],
    extras_require={
        "test": ["hypothesis>=6.80"],
    },
    entry_points={
        "console_scripts": ["latnoether=latnoether.cli:main"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
