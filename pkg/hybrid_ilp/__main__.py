"""Allow running as `python -m hybrid_ilp`."""

from hybrid_ilp.cli import main

main()
