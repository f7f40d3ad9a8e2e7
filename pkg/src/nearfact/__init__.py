"""Near-factorizations of finite abelian groups."""

from .groups import Group, parse_group, abelian_groups, direct_product

__version__ = "0.1.0"

__all__ = ["Group", "parse_group", "abelian_groups", "direct_product", "__version__"]
