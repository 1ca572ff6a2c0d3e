# Add project root to Python path for imports
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
