import json

from frolov_cubature.kernels.cinf import CInfKernel, cinf_eval
from frolov_cubature.kernels.psi import KernelPsiK, psi_eval
from frolov_cubature.kernels.quotients import min_k_for, product_quotient_sup, quotient_sup


def kernel_from_json(text: str):
    kind = json.loads(text).get("type")
    if kind == "psi_k":
        return KernelPsiK.from_json(text)
    if kind == "cinf":
        return CInfKernel.from_json(text)
    raise ValueError(f"Unknown kernel type {kind}.")
