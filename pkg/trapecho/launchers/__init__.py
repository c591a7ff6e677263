"""
Launchers: named presets that take one resolved configuration and run a
full experiment into an output directory, plus the command line around
them.
"""
