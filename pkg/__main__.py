"""Allow running the tuner directory with python: delegates to the orchestrator CLI."""
import sys

from orchestrator import main

sys.exit(main())
