"""Convenience entry point for running from project root."""
from forbidden_subposet.main import cli

if __name__ == "__main__":
    cli()
