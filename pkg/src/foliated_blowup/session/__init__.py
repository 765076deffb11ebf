"""Session scripts: parsing, execution, reports and the command line."""

from .parser import SessionScript, SessionSyntaxError, parse_session, print_session
from .runner import exit_status, run_session
from .suggest import suggest_center

__all__ = ["SessionScript", "SessionSyntaxError", "parse_session", "print_session",
           "run_session", "exit_status", "suggest_center"]
