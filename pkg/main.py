# main.py
import os
import sys

# Make `src`, `config` and `utils` importable when run from anywhere
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from dotenv import load_dotenv  # noqa: E402

# Load environment variables
load_dotenv()

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
