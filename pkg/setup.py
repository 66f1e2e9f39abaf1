from setuptools import setup

setup(name="graftlab",
      version="0.1.0",
      description="Grafted collar numerics",
      long_description="Spectral, variational and hyperbolic-strip solvers for grafted collars, with a verification suite for their boundary-term and area identities.",
      classifiers=["Development Status :: 4 - Beta",
                   "Programming Language :: Python :: 3"],
      packages=["graftlab", "graftlab.config"],
      python_requires=">=3.8",
      install_requires=["numpy", "scipy"],
      extras_require={"test": ["pytest"]},
      entry_points={"console_scripts": ["graftlab = graftlab.cli:main"]})
