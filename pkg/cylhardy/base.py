#!/usr/bin/env python3

"""Debug switch and exception hierarchy shared by all cylhardy modules"""

import logging

Debugging = False

LOGGER = logging.getLogger("cylhardy")


def DBG(*args):
    if Debugging:
        msg = " ".join([str(a) for a in args])
        LOGGER.debug(msg)


def set_debugging(flag):
    """Switch debug output on or off for the whole package."""
    global Debugging
    Debugging = bool(flag)
    if Debugging and not LOGGER.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        LOGGER.addHandler(handler)
    LOGGER.setLevel(logging.DEBUG if Debugging else logging.WARNING)


class CylHardyException(Exception):
    """Base class for all cylhardy exceptions"""

    def __init__(self, message, details=None):
        Exception.__init__(self, message)
        self.message = message
        # optional context, rendered as "(key: value, ...)"
        self.details = dict(details) if details else {}

    def __str__(self):
        msg = self.message
        if self.details:
            parts = [f"{key}: {val}" for key, val in self.details.items()]
            msg = f"{msg} ({', '.join(parts)})"
        return msg


class DomainError(CylHardyException, ValueError):
    def __init__(self, message, details=None):
        CylHardyException.__init__(self, message, details)


class CapabilityError(CylHardyException):
    def __init__(self, message, details=None):
        CylHardyException.__init__(self, message, details)


class OrderExhaustedError(CapabilityError):
    def __init__(self, message, details=None):
        CapabilityError.__init__(self, message, details)


class DivergenceError(CylHardyException):
    def __init__(self, message, details=None):
        CylHardyException.__init__(self, message, details)


class HypothesisViolation(CylHardyException, ValueError):
    def __init__(self, message, details=None):
        CylHardyException.__init__(self, message, details)


class QuadratureError(CylHardyException):
    def __init__(self, message, details=None):
        CylHardyException.__init__(self, message, details)


class ReductionNotApplicable(CylHardyException):
    def __init__(self, message, details=None):
        CylHardyException.__init__(self, message, details)


class ConfigError(CylHardyException):
    def __init__(self, message, details=None):
        CylHardyException.__init__(self, message, details)
