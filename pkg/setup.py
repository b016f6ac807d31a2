from setuptools import find_packages, setup

setup(name='MomentumCheck',
      version='0.1',
      description='Numerical checks of convexity and openness of momentum maps',
      license='MIT',
      packages=find_packages(exclude=['examples', 'examples.*']),
      install_requires=['numpy>=1.22', 'scipy>=1.6', 'pandas', 'deco', 'networkx'],
      extras_require={'test': ['pytest', 'hypothesis']},
      entry_points={'console_scripts': ['mck=MomentumCheck.scripts.mck:main']},
      zip_safe=False)
