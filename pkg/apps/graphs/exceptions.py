from custom_tools.exceptions import InputError


class GraphConstructionError(InputError):
    """Invalid neighbour-graph parameters (k, r, too few points, bad scales)."""
