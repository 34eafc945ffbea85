from setuptools import setup, find_packages

setup(
    name="catsim",
    version="0.2.0",
    description="Cat-state generation in a BEC cavity-optomechanical system: models, oracles and scenario runner",
    author="catsim contributors",
    packages=find_packages(include=["src", "src.*"]),
    py_modules=["app"],
    include_package_data=True,
    package_data={"src": ["data/schemas/*.json"]},
    python_requires=">=3.10",

    install_requires=[
        "numpy>=1.26",
        "scipy>=1.11",
        "jsonschema>=4.21.1",
        "python-dotenv>=1.2.1",
    ],

    extras_require={
        "dev": [
            "pytest>=9.0.1",
            "pytest-cov>=7.0.0",
            "flake8>=7.3.0",
            "black>=25.11.0",
        ]
    },

    entry_points={
        "console_scripts": [
            "catsim=app:main",
        ]
    },

    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Environment :: Console",
        "Topic :: Scientific/Engineering :: Physics",
        "Topic :: Software Development :: Libraries :: Python Modules",
    ],
)
