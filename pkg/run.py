#!/usr/bin/env python3
"""
robustkz runner
Runs the command line from a source checkout: python run.py <command> ...
"""

import sys

from robustkz.cli import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
