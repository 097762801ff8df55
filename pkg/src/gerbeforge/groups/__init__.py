"""Exact integer linear algebra and finitely generated abelian groups."""

from .abelian import (
    TRIVIAL,
    Z,
    DirectSum,
    FgAbGroup,
    GroupElement,
    GroupHom,
    ParentMismatch,
    Subquotient,
    TensorProduct,
    cokernel,
    cyclic,
    direct_sum,
    hom_cokernel,
    hom_compose,
    hom_image,
    hom_kernel,
    homology_lattice,
    image_factorization,
    is_injective,
    is_surjective,
    kernel_inclusion,
    preimage,
    random_hom,
    tensor,
    tensor_elements,
    tensor_hom,
)
from .linalg import IntMatrix, hstack, kernel_lattice, lattice_basis, smith_normal_form, solve, vstack

__all__ = [
    "TRIVIAL", "Z", "DirectSum", "FgAbGroup", "GroupElement", "GroupHom", "IntMatrix",
    "ParentMismatch", "Subquotient", "TensorProduct", "cokernel", "cyclic", "direct_sum",
    "hom_cokernel", "hom_compose", "hom_image", "hom_kernel", "homology_lattice", "hstack",
    "image_factorization", "is_injective", "is_surjective", "kernel_inclusion", "kernel_lattice",
    "lattice_basis", "preimage", "random_hom", "smith_normal_form", "solve", "tensor", "tensor_elements",
    "tensor_hom", "vstack",
]
