# Handlers module
# One module per command group; each handler takes a RunConfig and returns a CommandResult
from . import bch, ops, perturb, sample, spectrum, verify
