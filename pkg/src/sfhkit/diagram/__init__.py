"""Balanced sutured Heegaard diagrams and triple diagrams as cell complexes."""
from .cells import (QUADRANTS, CellDiagram, Crossing, Orbit, Region, RotationSystem,
                    SuturedDiagram, TripleDiagram, canonical_rotation, is_suture_arc,
                    rotation_system, seg_name)
from .construct import (annulus_marking, attach_onehandle_annulus, boundary_sum, build_translate_triple,
                        detach_annulus, disjoint_union, erase_family, region_merge_map, is_nice,
                        reverse_orientation, swap_beta_delta, translate_correspondence)
from .generators import Generator, enumerate_generators
from .io import (components, dumps, family_independent, load, loads, save, to_dict,
                 validate_diagram)

__all__ = [
    "QUADRANTS", "CellDiagram", "Crossing", "Generator", "Orbit", "Region", "RotationSystem",
    "SuturedDiagram", "TripleDiagram", "annulus_marking", "attach_onehandle_annulus",
    "boundary_sum", "build_translate_triple", "canonical_rotation", "components", "detach_annulus",
    "disjoint_union", "dumps", "enumerate_generators", "erase_family", "family_independent",
    "is_nice", "is_suture_arc", "load", "loads", "region_merge_map", "reverse_orientation", "rotation_system",
    "save", "seg_name", "swap_beta_delta", "to_dict", "translate_correspondence", "validate_diagram",
]
