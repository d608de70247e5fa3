from setuptools import find_packages, setup

setup(
    name="sschain",
    version="1.0.0",
    description="Dispersion, fractality, continuum limit and wave dynamics of self-similar chains",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "pydantic>=2.5",
        "pydantic-settings>=2.1",
        "python-dotenv>=1.0",
        "structlog>=23.1",
    ],
    extras_require={"test": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["sschain=sschain.cli.main:run"]},
)
