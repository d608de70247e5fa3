from sschain.cli.commands import continuum, density, dispersion, fractal, simulate

# Registration order is the order shown in --help
COMMANDS = [dispersion, fractal, density, simulate, continuum]
