#ifndef PATSP_FORMULATIONS_HPP
#define PATSP_FORMULATIONS_HPP

#include "patsp/graph.hpp"
#include "patsp/linsys.hpp"
#include "patsp/parameters.hpp"

#include <optional>
#include <string>
#include <vector>

namespace patsp {

/// Names follow one convention across modules: x[i,j], u[i], f[i,j], v[k,i],
/// u[k,l][i], f[k][i,j], and u[label][i] / f[label][i,j] for Ef blocks.
std::string x_name(int i, int j);
std::string x_name(const Arc &arc);

/// The x[i,j] names of every arc, in arc-index order.
std::vector<std::string> x_names(const ArcSpace &space);

enum class Family {
    ap,
    d_mtz,
    d_dl,
    b_scf,
    dfj_clique,
    dfj_cut,
    circuit,
    weak_circuit,
    weak_clique,
    lifted_weak_circuit,
    rmtz,
    l1rmtz,
    mcf,
    cl_mtz,
    cl_dl,
    cl_scf,
    ef_mtz,
    ef_dl,
    ef_scf,
    cl_dl_on_vmtz,
    /// The un-normalized classic compact formulations.
    mtz,
    dl,
    scf,
};

std::string to_string(Family family);
/// Accepts the CLI spelling ("d-mtz", "cl-dl-on-vmtz", ...).
Family parse_family(const std::string &text);
std::vector<Family> all_families();

enum class VarSpace { x_only, extended };

struct FormulationId {
    Family family = Family::ap;
    VarSpace space = VarSpace::x_only;
    /// Single parameter for d_mtz / d_dl.
    std::optional<DVec> d;
    /// Single parameter for b_scf.
    std::optional<BVec> b;
    /// Parameter lists for the Ef families.
    std::vector<DVec> d_list;
    std::vector<BVec> b_list;

    std::string label() const;
};

bool is_parametric(Family family);
/// Throws std::invalid_argument when the payload does not fit the family.
void validate(const FormulationId &id);

struct BuildOptions {
    /// LP-prune redundant inequalities after building.
    bool prune = false;
    /// Render SCF-type projections as A(S) rows instead of delta+(S) cuts.
    bool clique_form = false;
};

LinSys build_ap(const ArcSpace &space);

LinSys build_q_mtz(const ArcSpace &space, const DVec &d);
LinSys build_p_mtz(const ArcSpace &space, const DVec &d);
LinSys build_q_dl(const ArcSpace &space, const DVec &d);
LinSys build_p_dl(const ArcSpace &space, const DVec &d);
LinSys build_q_scf(const ArcSpace &space, const BVec &b);
LinSys build_p_scf(const ArcSpace &space, const BVec &b, bool clique_form = false);

LinSys build_dfj_clique(const ArcSpace &space);
LinSys build_dfj_cut(const ArcSpace &space);
LinSys build_circuit(const ArcSpace &space);
LinSys build_weak_circuit(const ArcSpace &space);
LinSys build_weak_clique(const ArcSpace &space);
/// The lifted weak circuit rows (|C| >= 3) together with x_ij + x_ji <= 1.
LinSys build_lifted_weak_circuit(const ArcSpace &space);
/// RMTZ with 0 <= v <= 1 (implied by the other rows on P_AP).
LinSys build_rmtz(const ArcSpace &space);
LinSys build_l1rmtz(const ArcSpace &space);
LinSys build_mcf(const ArcSpace &space);
LinSys build_classic_mtz(const ArcSpace &space);
LinSys build_classic_dl(const ArcSpace &space);
LinSys build_classic_scf(const ArcSpace &space);

/// Closure H-descriptions in x.
LinSys build_pbar_mtz(const ArcSpace &space);
LinSys build_pbar_dl(const ArcSpace &space);
LinSys build_pbar_scf(const ArcSpace &space, bool clique_form = false);
LinSys build_cl_dl_on_vmtz(const ArcSpace &space);
/// Closure extended formulations with per-vertex auxiliary copies.
LinSys build_qbar_mtz(const ArcSpace &space);
LinSys build_qbar_dl(const ArcSpace &space);
LinSys build_qbar_scf(const ArcSpace &space);

/// One auxiliary block per listed parameter over shared AP rows. Blocks are
/// labelled by `labels` (default: 0, 1, ...). Throws on an empty list.
LinSys build_ef_mtz(const ArcSpace &space, const std::vector<DVec> &params,
                    std::vector<std::string> labels = {});
LinSys build_ef_dl(const ArcSpace &space, const std::vector<DVec> &params,
                   std::vector<std::string> labels = {});
LinSys build_ef_scf(const ArcSpace &space, const std::vector<BVec> &params,
                    std::vector<std::string> labels = {});

/// Dispatch on a FormulationId. x_only yields the family's H-description in
/// x (for extended families: the known projection); extended yields the
/// system with auxiliary variables (identical for pure x families).
LinSys build(const ArcSpace &space, const FormulationId &id, const BuildOptions &options = {});

/// {"family","space":"x"|"extended", and "d"/"b"/"d_list"/"b_list" as needed}.
std::string to_json(const FormulationId &id);
FormulationId formulation_from_json(const std::string &text);

} // namespace patsp

#endif
