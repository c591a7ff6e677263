from setuptools import find_packages, setup

setup(
    name='trapecho',
    version='0.1.0',
    description='Microwave Ramsey, echo and spectroscopy simulations of '
                'atoms in a state-dependent optical dipole trap',
    packages=find_packages(include=['trapecho', 'trapecho.*']),
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'scipy',
        'pandas>=1.5',
        'joblib',
        'matplotlib',
        'python-dateutil',
        'gtimer',
        'PyYAML',
        'tabulate',
        'GitPython',
    ],
    extras_require={'test': ['pytest']},
    entry_points={
        'console_scripts': ['trapecho=trapecho.launchers.cli:main'],
    },
)
