// Executable registry of the known integrable classes: representatives,
// replayable derivation chains, first-integral transports, and generation of
// new classes via the x<->y inversion of solvable members.
#pragma once

#include "abel/json_io.hpp"

namespace abel {

struct CatalogEntry {
    std::string id;
    std::string classification;          // AIL | AIR | AIA
    std::vector<std::string> params;
    json raw;

    /// The printed representative; `apply_target_bind` substitutes the
    /// derivation's parameter rewrite (e.g. alpha -> kappa^2) for identity
    /// checks against the replayed chain.
    RationalODE representative(bool apply_target_bind = true) const;
    bool solvable() const { return raw.contains("solvable"); }
};

struct FitReport {
    std::string id;
    bool identity = false;
    bool shape_ok = false;
    bool has_first_integral = false;
    bool first_integral_ok = false;
    std::vector<std::string> steps;
    std::string residual;                // nonzero residual when identity fails
    bool source_discrepancy() const { return !identity; }
    bool ok() const { return identity && shape_ok && (!has_first_integral || first_integral_ok); }
};

struct InverseClassResult {
    RationalODE equation;
    std::optional<Expr> psi;
    bool psi_verified = false;
    bool output_is_abel = false;
    bool output_aia_form = false;
    std::string known_entry;             // catalog id when the image is a known representative
};

class Catalog {
public:
    /// Loads from `path`, the ABEL_CATALOG environment variable, or the
    /// compiled-in default, in that order.
    static Catalog load(const std::string& path = "");

    const std::vector<CatalogEntry>& entries() const { return entries_; }
    const CatalogEntry& get(const std::string& id) const;

    /// Replays the recorded derivation with exact arithmetic and checks the
    /// identity against the printed representative.
    FitReport verify_fit(const std::string& id) const;
    /// All entries, fanned out across workers, ordered by id.
    std::vector<FitReport> verify_all(bool parallel = true) const;

    /// Verified first integral of a solvable entry's representative.
    FirstIntegral first_integral_of(const std::string& id) const;

    InverseClassResult generate_inverse_class(const RationalODE& e,
                                              std::optional<Expr> psi) const;
    InverseClassResult generate_inverse_class(const std::string& id) const;

private:
    RationalODE resolve_source(const json& source) const;
    std::vector<CatalogEntry> entries_;
};

} // namespace abel
