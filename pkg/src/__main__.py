from src.cli import cli

cli()
