from setuptools import setup

setup(
    name='visco-impact',
    version='0.1.0',
    description='Linear viscoelastic impact models and their numerical oracle',
    packages=['visco_impact'],
    package_data={'visco_impact': ['data/table1.csv']},
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.22',
        'scipy>=1.8',
        'simplejson',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['visco-impact = visco_impact.cli:main'],
    },
)
