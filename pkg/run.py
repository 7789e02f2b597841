#!/usr/bin/env python3
"""
qord launcher

Run the qord command line from a source checkout without installing it.
"""

import sys

from qord.cli import run

if __name__ == '__main__':
    sys.exit(run())
