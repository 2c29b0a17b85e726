"""hlink: enumeration and classification of handlebody-link diagrams.

Subpackages cover the full pipeline: plane multigraph enumeration (planar),
crossing assignment and local moves (diagram), complement-group presentations
(wirtinger), counting invariants (groups, invariants), composite constructions
(sums), and the census driver (census, cli).
"""

__version__ = "0.1.0"
