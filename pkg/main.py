"""
sschain - Self-similar chain dynamics
Command-line entry point: python main.py <command> [flags]
"""

from sschain.cli.main import run

if __name__ == "__main__":
    run()
