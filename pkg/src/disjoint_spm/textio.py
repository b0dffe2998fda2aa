from typing import Iterable, Iterator


def data_lines(lines: Iterable[str]) -> Iterator[str]:
    """Stripped lines with blanks and '#' comments dropped."""
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            yield line
