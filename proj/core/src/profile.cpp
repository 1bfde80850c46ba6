#include "wavedamp/profile.hpp"

#include <cmath>
#include <limits>

#include "wavedamp/errors.hpp"
#include "wavedamp/quadrature.hpp"

namespace wavedamp {

struct Profile::Impl {
    Family family = Family::Constant;
    std::string family_name = "const";
    Params params;
    double c = 0.0;
    double alpha = 0.0; // exponent for power/exp, sign for doubleexp
    std::shared_ptr<CumulativeIntegral> cumulative; // doubleexp primitive only

    double value(double t) const {
        switch (family) {
            case Family::Power: return c * std::pow(1.0 + t, alpha);
            case Family::Exp: return c * std::exp(alpha * t);
            case Family::DoubleExp: return c * std::exp(alpha * std::exp(t));
            case Family::Constant: return c;
        }
        return 0.0;
    }
    double d1(double t) const {
        switch (family) {
            case Family::Power: return c * alpha * std::pow(1.0 + t, alpha - 1.0);
            case Family::Exp: return alpha * value(t);
            case Family::DoubleExp: return alpha * std::exp(t) * value(t);
            case Family::Constant: return 0.0;
        }
        return 0.0;
    }
    double d2(double t) const {
        switch (family) {
            case Family::Power:
                return c * alpha * (alpha - 1.0) * std::pow(1.0 + t, alpha - 2.0);
            case Family::Exp: return alpha * alpha * value(t);
            case Family::DoubleExp: {
                const double et = std::exp(t);
                return alpha * et * (1.0 + alpha * et) * value(t);
            }
            case Family::Constant: return 0.0;
        }
        return 0.0;
    }
    double primitive(double t) const {
        switch (family) {
            case Family::Power:
                if (alpha == -1.0) return c * std::log1p(t);
                return c * (std::pow(1.0 + t, alpha + 1.0) - 1.0) / (alpha + 1.0);
            case Family::Exp:
                if (alpha == 0.0) return c * t;
                return c * std::expm1(alpha * t) / alpha;
            case Family::DoubleExp: return (*cumulative)(t);
            case Family::Constant: return c * t;
        }
        return 0.0;
    }
};

double Profile::value(double t) const { return impl_ ? impl_->value(t) : 0.0; }
double Profile::d1(double t) const { return impl_ ? impl_->d1(t) : 0.0; }
double Profile::d2(double t) const { return impl_ ? impl_->d2(t) : 0.0; }
double Profile::primitive(double t) const { return impl_ ? impl_->primitive(t) : 0.0; }

Family Profile::family() const { return impl_ ? impl_->family : Family::Constant; }

const std::string& Profile::family_name() const {
    static const std::string kZero = "const";
    return impl_ ? impl_->family_name : kZero;
}

const Params& Profile::params() const {
    static const Params kEmpty{{"c", 0.0}};
    return impl_ ? impl_->params : kEmpty;
}

bool Profile::positive() const { return impl_ && impl_->c > 0.0; }

bool Profile::is_zero() const { return !impl_ || impl_->c == 0.0; }

Profile Profile::zero() { return make_profile("const", {{"c", 0.0}}); }

namespace {

double require_param(const Params& params, const std::string& key, const std::string& family) {
    auto it = params.find(key);
    if (it == params.end())
        throw ConfigError("profile family '" + family + "' requires parameter '" + key + "'");
    return it->second;
}

void reject_unknown(const Params& params, std::initializer_list<const char*> allowed,
                    const std::string& family) {
    for (const auto& [key, _] : params) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw ConfigError("profile family '" + family + "': unknown parameter '" + key + "'");
    }
}

} // namespace

Profile make_profile(const std::string& family, const Params& params) {
    auto impl = std::make_shared<Profile::Impl>();
    impl->family_name = family;
    impl->params = params;
    if (family == "power") {
        reject_unknown(params, {"c", "alpha"}, family);
        impl->family = Family::Power;
        impl->c = require_param(params, "c", family);
        impl->alpha = require_param(params, "alpha", family);
        if (impl->c <= 0.0) throw ConfigError("power profile requires c > 0");
    } else if (family == "exp") {
        reject_unknown(params, {"c", "alpha"}, family);
        impl->family = Family::Exp;
        impl->c = require_param(params, "c", family);
        impl->alpha = require_param(params, "alpha", family);
        if (impl->c <= 0.0) throw ConfigError("exp profile requires c > 0");
    } else if (family == "doubleexp") {
        reject_unknown(params, {"c", "sign"}, family);
        impl->family = Family::DoubleExp;
        impl->c = require_param(params, "c", family);
        const double sign = require_param(params, "sign", family);
        if (impl->c <= 0.0) throw ConfigError("doubleexp profile requires c > 0");
        if (sign != 1.0 && sign != -1.0) throw ConfigError("doubleexp sign must be +1 or -1");
        impl->alpha = sign;
        const double c = impl->c;
        impl->cumulative = std::make_shared<CumulativeIntegral>(
            [c, sign](double t) { return c * std::exp(sign * std::exp(t)); }, 1e-12, 0.125);
    } else if (family == "const") {
        reject_unknown(params, {"c"}, family);
        impl->family = Family::Constant;
        impl->c = require_param(params, "c", family);
        if (impl->c < 0.0) throw ConfigError("const profile requires c >= 0");
    } else {
        throw ConfigError("unknown profile family '" + family + "'");
    }
    Profile p;
    p.impl_ = std::move(impl);
    return p;
}

Profile reciprocal(const Profile& p) {
    if (!p.positive()) throw ConfigError("reciprocal requires a positive profile");
    const Params& pr = p.params();
    switch (p.family()) {
        case Family::Power:
            return make_profile("power", {{"c", 1.0 / pr.at("c")}, {"alpha", -pr.at("alpha")}});
        case Family::Exp:
            return make_profile("exp", {{"c", 1.0 / pr.at("c")}, {"alpha", -pr.at("alpha")}});
        case Family::DoubleExp:
            return make_profile("doubleexp", {{"c", 1.0 / pr.at("c")}, {"sign", -pr.at("sign")}});
        case Family::Constant:
            return make_profile("const", {{"c", 1.0 / pr.at("c")}});
    }
    throw ConfigError("reciprocal: unknown family");
}

double big_g(const Profile& g, double t) { return 0.5 * g.primitive(t); }

double big_b(const Profile& b, double t) { return b.primitive(t); }

double log_delta(const Profile& b, const Profile& g, double t, double xi) {
    return big_b(b, t) + 2.0 * big_g(g, t) * xi * xi;
}

double log_lambda(const Profile& b, const Profile& g, double t, double xi) {
    return 0.5 * log_delta(b, g, t, xi);
}

double guarded_exp(double x) {
    if (x > kExpArgCap) return std::numeric_limits<double>::infinity();
    if (x < -kExpArgCap) return 0.0;
    return std::exp(x);
}

} // namespace wavedamp
