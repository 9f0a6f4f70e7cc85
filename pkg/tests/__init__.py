# Test package for the realtime alternation workbench
from pathlib import Path

# Bundled machine files and TM fixtures
CONFIGS_DIR = Path(__file__).parent.parent / "configs"
