from setuptools import find_packages, setup

setup(
    name="p5color",
    version="0.1",
    packages=find_packages(include=["tno", "tno.*"]),
    python_requires=">=3.9",
    install_requires=[
        "click>=8.0",
        "marshmallow>=3.16,<4",
        "marshmallow-dataclass[enum]>=8.5.8,<9",
        "networkx>=2.8",
        "numpy>=1.22",
        "pandas>=1.4",
        "python-dotenv>=0.20",
        "structlog>=21.5",
    ],
    entry_points={"console_scripts": ["p5color=tno.p5_coloring.main:run"]},
)
