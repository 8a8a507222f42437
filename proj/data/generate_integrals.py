"""Regenerate the bundled FCIDUMP files (requires pyscf; run offline).

The toolkit itself never computes integrals; this script only documents
where the bundled inputs came from.
"""
import os

import numpy as np
from pyscf import gto, scf, mcscf, ao2mo, fci
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def full_space(atom, charge, name, basis="sto-3g"):
    mol = gto.M(atom=atom, basis=basis, charge=charge, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    path = os.path.join(HERE, name)
    fcidump.from_scf(mf, path, tol=1e-12)
    e_fci = fci.FCI(mf).kernel()[0]
    print(f"{name}: norb={mol.nao} nelec={mol.nelectron} E_hf={mf.e_tot:.10f} E_fci={e_fci:.10f}")


def active_space(atom, name, ncas, nelecas, basis="sto-3g"):
    mol = gto.M(atom=atom, basis=basis, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    cas = mcscf.CASCI(mf, ncas, nelecas)
    h1, ecore = cas.get_h1eff()
    h2 = ao2mo.restore(1, cas.get_h2eff(), ncas)
    path = os.path.join(HERE, name)
    fcidump.from_integrals(path, h1, h2, ncas, nelecas, nuc=ecore, tol=1e-12)
    e_cas = cas.kernel()[0]
    print(f"{name}: ncas={ncas} nelecas={nelecas} E_casci={e_cas:.10f}")


if __name__ == "__main__":
    full_space("H 0 0 0; H 0 0 0.7414", 0, "h2_sto3g_0.7414.fcidump")
    r = 0.9
    h = r * np.sqrt(3) / 2
    full_space(f"H 0 0 0; H {r} 0 0; H {r/2} {h} 0", 1, "h3plus_sto3g.fcidump")
    for d in (0.5, 0.75, 1.0, 1.5, 2.0, 2.5):
        full_space(f"H 0 0 0; H 0 0 {d}", 0, f"h2_scan_{d:.2f}.fcidump")
    active_space("Li 0 0 0; H 0 0 2.5", "lih_sto3g_2.5_cas8_2.fcidump", 4, 2)
