"""
Setup configuration for pnpvamp package
"""

from setuptools import setup, find_packages

setup(
    name="pnpvamp",
    version="1.0.0",
    author="pnpvamp Team",
    description="Vector AMP with plug-in denoisers, state evolution and bilinear lifting experiments",
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Image Processing",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
    ],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.26.0",
        "scipy>=1.11.0",
        "PyWavelets>=1.5.0",
        "python-dotenv>=1.0.1",
        "pydantic>=2.6.0",
        "pydantic-settings>=2.1.0",
        "pillow>=10.3.0",
        "loguru>=0.7.2",
        "rich>=13.7.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.4",
            "pytest-asyncio>=0.23.3",
            "pytest-cov>=4.1.0",
            "black>=24.1.1",
            "flake8>=7.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "pnpvamp=cli.main:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
