from setuptools import setup

setup(
  name = 'spread_sim',
  py_modules = ['spread_config', 'spread_errors', 'spread_graph', 'spread_dynamics', 'spread_meanfield',
                'spread_efficiency', 'spread_batch', 'spread_io', 'spread_run', 'Logger'],
  version = '0.1',
  description = 'Two-stage information spreading simulator on social networks with authority announcements and intervention timing efficiency',
  author = '',
  author_email = '',
  keywords = ['information spreading', 'rumor', 'epidemic model', 'social networks', 'scale-free network', 'small world network', 'simulation'],
  install_requires = ['numpy', 'scipy', 'pandas', 'networkx'],
  extras_require = {'test': ['pytest']},
  entry_points = {'console_scripts': ['spread_run = spread_run:main']},
  classifiers = [],
)
