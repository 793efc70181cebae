from setuptools import setup

from dcdrls import __version__

with open("requirements.txt") as f:
    requirements = [line.strip() for line in f
                    if line.strip() and not line.startswith("pytest")]

setup(
    name="dcdrls",
    version=__version__,
    packages=["dcdrls", "dcdrls.experiment"],
    package_data={"dcdrls": ["configs/*.ini"]},
    install_requires=requirements,
    entry_points={
        "console_scripts": ["dcdrls = dcdrls.experiment.__main__:main"],
    },
)
