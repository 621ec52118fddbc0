import os

from bent_toolkit.errors import FormatError
from bent_toolkit.tools.boolean_function import BooleanFunction, parse_truth_table
from bent_toolkit.tools.constructions import BentTriple

# relative paths resolve against BENT_TOOLKIT_ROOT when it is set, else the working directory
def _resolve(file_path: str) -> str:
    root = os.environ.get('BENT_TOOLKIT_ROOT', os.getcwd())
    return os.path.abspath(os.path.join(root, os.path.expanduser(file_path)))


def read_file(file_path: str) -> str:
    """Reads the full content of a text file."""
    try:
        with open(_resolve(file_path), 'r') as f:
            return f.read()
    except FileNotFoundError:
        raise FormatError(f"File not found at '{file_path}'.")
    except OSError as e:
        raise FormatError(f"Could not read '{file_path}': {e}")


def write_file(file_path: str, content: str) -> str:
    """Writes content to a file, creating parent directories as needed."""
    full_path = _resolve(file_path)
    try:
        os.makedirs(os.path.dirname(full_path), exist_ok=True)
        with open(full_path, 'w') as f:
            f.write(content)
    except OSError as e:
        raise FormatError(f"Could not write '{file_path}': {e}")
    return f"Successfully wrote to {file_path}."


def read_truth_table(file_path: str) -> BooleanFunction:
    """A table file holds one binary or '0x' hex truth table; surrounding whitespace is ignored."""
    text = "".join(read_file(file_path).split())
    if not text:
        raise FormatError(f"File '{file_path}' is empty.")
    return parse_truth_table(text)


def write_truth_table(file_path: str, f: BooleanFunction, fmt: str = 'binary') -> str:
    if fmt == 'hex' and f.n < 3:
        fmt = 'binary'
    return write_file(file_path, f.render(fmt) + "\n")


def read_triple(file_path: str) -> BentTriple:
    """A triple file holds the tables of A, B and C on three non-blank lines."""
    return BentTriple.parse(read_file(file_path))


def write_triple(file_path: str, t: BentTriple, fmt: str = 'binary') -> str:
    return write_file(file_path, t.render(fmt) + "\n")
