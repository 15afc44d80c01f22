"""Subcommands of the embedding lab; each module provides add_arguments(parser) and run(config, context)."""

COMMANDS = {
    'rearrange': 'src.commands.rearrange',
    'norm': 'src.commands.norm',
    'target': 'src.commands.target',
    'modulus': 'src.commands.modulus',
    'verify-hardy': 'src.commands.verify_hardy',
    'verify-k': 'src.commands.verify_k',
    'verify-sobolev2d': 'src.commands.verify_sobolev2d',
    'golden': 'src.commands.golden',
}

__all__ = ['COMMANDS']
