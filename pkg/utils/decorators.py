from functools import wraps
import logging

import click
from flask import jsonify

from utils.errors import RangeEqError

logger = logging.getLogger(__name__)


def json_errors(f):
    """Turn model errors raised by a route into {'success': False, 'error': ...} responses."""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except RangeEqError as e:
            logger.warning(f'{type(e).__name__} in {f.__name__}: {e}')
            return jsonify({'success': False, 'error': str(e), 'kind': type(e).__name__}), e.http_status
    return decorated_function


def exit_codes(f):
    """Log model errors raised by a CLI command and exit with the error's code."""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except RangeEqError as e:
            logger.error(f'{type(e).__name__}: {e}')
            click.echo(f'error: {e}', err=True)
            raise SystemExit(e.exit_code)
    return decorated_function
