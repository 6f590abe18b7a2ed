"""Main CLI entry point for the forbidden-subposet toolkit."""
import click

from forbidden_subposet import __version__
from forbidden_subposet.commands.extremal import extremal_group
from forbidden_subposet.commands.poset import poset_group
from forbidden_subposet.commands.verify import verify_command


@click.group()
@click.version_option(version=__version__)
def cli() -> None:
    """Forbidden subposets in the Boolean lattice: poset tools, checks and extremal search."""
    pass


# Register commands
cli.add_command(poset_group, "poset")
cli.add_command(verify_command, "verify")
cli.add_command(extremal_group, "extremal")


if __name__ == "__main__":
    cli()
