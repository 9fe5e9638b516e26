import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from cheshire.main import cli  # noqa: E402

if __name__ == "__main__":
    cli(prog_name="cheshire")
