#pragma once

#include <map>
#include <string>
#include <vector>

#include "wavedamp/profile.hpp"

namespace wavedamp {

enum class DampingKind { Scattering, NonEffective, Effective, OverDamping, Unclassified };

std::string to_string(DampingKind k);
DampingKind damping_kind_from_string(const std::string& s);

enum class VerdictState { Pass, Fail, Undetermined, Boundary };

std::string to_string(VerdictState s);

struct Verdict {
    std::string condition; // e.g. "A3", "L1-tail"
    VerdictState state = VerdictState::Undetermined;
    double witness = 0.0; // fitted constant / measured limit, when meaningful
    std::string note;
};

struct DampingClass {
    DampingKind kind = DampingKind::Unclassified;
    std::vector<Verdict> evidence;
    const Verdict* find(const std::string& condition) const;
};

struct GridSpec {
    double t_min = 0.0;
    double t_max = 50.0;
    int nodes = 2000;
    bool log_spacing = false;
    std::vector<double> times() const;
};

/// Taxonomy of the friction coefficient, decided numerically:
/// Scattering when \int b converges, OverDamping when \int 1/b converges,
/// NonEffective when limsup t b < 1 plus structural conditions, Effective
/// when t b -> infinity plus structural conditions.  The evidence list always
/// records the measurements behind the decision.
DampingClass classify_friction(const Profile& b, double horizon, const GridSpec& grid);

/// Named condition sets from the theorem hypotheses.
enum class ConditionSet { A1A3, Ap1Ap3, NEF, Bp1Bp3, B1B3, EF, G1G4, E1E5, OD1OD2 };

std::string to_string(ConditionSet s);
ConditionSet condition_set_from_string(const std::string& s);

struct ConditionReport {
    ConditionSet set = ConditionSet::A1A3;
    std::vector<Verdict> verdicts;
    std::map<std::string, double> fitted; // minimal admissible constants
    bool all_pass() const;
    const Verdict* find(const std::string& condition) const;
};

/// Verifies every inequality of the set on the sampled horizon, reporting the
/// minimal admissible constant for the ones with a free constant.  Profiles
/// not needed by a set may be null; a missing required profile throws
/// ConfigError.
ConditionReport check_conditions(ConditionSet set, const Profile* b, const Profile* g,
                                 double horizon, const GridSpec& grid);

} // namespace wavedamp
