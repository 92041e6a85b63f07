from setuptools import find_packages, setup


with open("./requirements.txt", "r") as f:
    requirements = f.readlines()


setup(
    name="frolov_cubature",
    version="0.1.0",
    description="Frolov cubature with change-of-variable and periodization modifiers",
    packages=find_packages(),
    package_data={"frolov_cubature": ["configs/*.json"]},
    install_requires=requirements,
    entry_points={
        "console_scripts": ["frolov-cubature=frolov_cubature.scripts.cli:main"],
    },
)
