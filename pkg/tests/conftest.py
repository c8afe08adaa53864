import sys
from pathlib import Path

# Make sibling test helpers (naive_features, test_nnet fixtures) importable
# regardless of how pytest was invoked.
sys.path.insert(0, str(Path(__file__).parent))
