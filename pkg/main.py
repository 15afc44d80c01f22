#!/usr/bin/env python3
"""Main entry point for the embedding lab.

Usage:
    python3 main.py golden --check tests/fixtures/golden_tables.yaml
    python3 main.py target --young power:2 --n 3 --setting finite
    python3 main.py --tol bisection.iterations=80 norm --space lorentz:2,1 --profile f.csv
"""

import sys
from pathlib import Path

# Add project root to Python path for imports
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.embedding_lab import main  # noqa: E402

if __name__ == "__main__":
    main()
