# log setup for the spreading simulator: messages go to the terminal and,
# if a filename is given, are duplicated into a log file (appending)

import sys
import logging

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# top-level names of the simulator modules, all configured together
LOGGER_NAMES = ('spread_graph', 'spread_dynamics', 'spread_meanfield', 'spread_efficiency',
                'spread_batch', 'spread_io', 'spread_run')


class Logger(object):
    def __init__(self, filename=None, verbose=True):
        self.filename = filename
        self.level = logging.INFO if verbose else logging.WARNING
        self.handlers = [logging.StreamHandler(sys.stderr)]
        if self.filename is not None:
            self.handlers.append(logging.FileHandler(filename, mode='a'))
        formatter = logging.Formatter(LOG_FORMAT)
        for h in self.handlers:
            h.setFormatter(formatter)

    def install(self):
        for name in LOGGER_NAMES:
            log = logging.getLogger(name)
            log.setLevel(self.level)
            for h in list(log.handlers):
                log.removeHandler(h)
                h.close()
            for h in self.handlers:
                log.addHandler(h)
            log.propagate = False
        return self

    def close(self):
        for name in LOGGER_NAMES:
            log = logging.getLogger(name)
            for h in self.handlers:
                log.removeHandler(h)
        for h in self.handlers:
            h.close()


def setup_logging(filename=None, verbose=True):
    '''route simulator log messages to stderr (and optionally a log file); returns the Logger'''
    return Logger(filename, verbose).install()
