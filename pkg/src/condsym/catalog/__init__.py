'''Catalogs of operators, solutions and hodograph arrows, keyed by name.'''

from fnmatch import fnmatchcase
from typing import Dict, List

from condsym.errors import UnknownCatalogKeyError


def lookup(library: Dict[str, object], pattern: str) -> List[str]:
    """Sorted keys of `library` matching a key or a glob pattern.

    Raises:
        UnknownCatalogKeyError: if nothing matches.
    """
    if pattern in library:
        return [pattern]
    keys = sorted(key for key in library if fnmatchcase(key, pattern))
    if len(keys) == 0:
        raise UnknownCatalogKeyError(
            f'No catalog entry matches {pattern!r}.')
    return keys
