#!/usr/bin/env python3
"""
Run script for GroverLab
"""

from groverlab.main import main

if __name__ == "__main__":
    raise SystemExit(main())
