from setuptools import setup, find_packages

setup(
    name='ccg-tool',
    version='0.1.0',
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    package_data={
        'clifford_cyclotomic_tool': ['resources/*.yml'],
    },
    python_requires='>=3.9',
    install_requires=[
        'Click',
        'PyYAML',
        'sympy>=1.13',
        'mpmath',
    ],
    entry_points={
        'console_scripts': [
            'ccg = clifford_cyclotomic_tool.cli:cli',
        ],
    },
)
