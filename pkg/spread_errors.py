'''Spread_Errors

exception classes used throughout the spreading simulator

All errors derive from SpreadError, which carries a message plus optional context
(the offending value, a file path, or the original error that was caught).
'''


class SpreadError(Exception):

    def __init__(self, message, value=None, orig_error=None):

        # Call the base class constructor with the parameters it needs
        super(SpreadError, self).__init__(message)
        self.value = value
        self.original_error = orig_error


class InvalidSpecError(SpreadError, ValueError):
    '''graph specification cannot be realized (e.g. n too small for the seed clique, odd WS degree)'''


class InvalidConfigError(SpreadError, ValueError):
    '''simulation or efficiency parameters outside their domain'''


class InvalidInputError(SpreadError, ValueError):
    '''density series, traces or external data that do not satisfy an operation's preconditions'''


class DomainError(SpreadError, ValueError):
    '''score function evaluated outside its mathematical domain'''


class InternalStateError(SpreadError):
    '''simulation state that cannot occur after a valid initialization'''


class IllegalTransitionError(SpreadError):
    '''phase transition that is not allowed, e.g. a second announcement'''


class ExportError(SpreadError):

    def __init__(self, message, path=None, orig_error=None):
        if path is not None:
            message = "%s: %s" % (message, path)
        super(ExportError, self).__init__(message, value=path, orig_error=orig_error)
        self.path = path
