"""Report rendering: JSON for machines, aligned ``key  value`` text for people."""

import json
import sys
from typing import Any, List, Optional, TextIO


def render_json(report: Any) -> str:
    return json.dumps(report, indent=2)


def _is_scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def _scalar_text(value: Any) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    return str(value)


def _inline(value: Any) -> Optional[str]:
    """One-line form of flat lists, e.g. a payoff vector; None if nested."""
    if isinstance(value, list) and all(_is_scalar(item) for item in value):
        return '(' + ', '.join(_scalar_text(item) for item in value) + ')'
    return None


def _render(value: Any, indent: int, lines: List[str]) -> None:
    pad = '  ' * indent
    if isinstance(value, dict):
        width = max((len(str(key)) for key in value), default=0)
        for key, item in value.items():
            text = _scalar_text(item) if _is_scalar(item) else _inline(item)
            if text is not None:
                lines.append(f'{pad}{str(key).ljust(width)}  {text}')
            else:
                lines.append(f'{pad}{key}:')
                _render(item, indent + 1, lines)
    elif isinstance(value, list):
        for item in value:
            text = _scalar_text(item) if _is_scalar(item) else _inline(item)
            if text is not None:
                lines.append(f'{pad}- {text}')
            else:
                lines.append(f'{pad}-')
                _render(item, indent + 1, lines)
    else:
        lines.append(f'{pad}{_scalar_text(value)}')


def render_text(report: Any) -> str:
    """Aligned text; nested objects indent by two spaces, flat lists print inline."""
    lines: List[str] = []
    _render(report, 0, lines)
    return '\n'.join(lines)


def emit(report: Any, as_json: bool = False, stream: Optional[TextIO] = None) -> None:
    """Write ``report`` to stdout (or ``stream``)."""
    stream = stream or sys.stdout
    stream.write((render_json(report) if as_json else render_text(report)) + '\n')
    stream.flush()
