#pragma once

// Adapters turning the model vector fields into flat RhsFn callables for
// the integrator.

#include <sstream>

#include "qslab/integrator.hpp"
#include "qslab/model_core.hpp"
#include "qslab/observables.hpp"

namespace qslab {

inline RhsFn reduced_flow(const ModelParams& p) {
    p.validate();
    return [p](double, const std::vector<double>& y, std::vector<double>& dy) {
        const ModeState f = reduced_rhs(ModeState::from_flat(y.data()), p);
        const auto a = f.flat();
        dy.assign(a.begin(), a.end());
    };
}

inline RhsFn observable_flow(const ModelParams& p) {
    p.validate();
    return [p](double, const std::vector<double>& y, std::vector<double>& dy) {
        const ObservableState f = observable_rhs(ObservableState::from_flat(y.data()), p);
        const auto a = f.flat();
        dy.assign(a.begin(), a.end());
    };
}

inline std::string params_note(const ModelParams& p) {
    std::ostringstream os;
    os << "nu=" << p.nu << " delta=" << p.delta;
    return os.str();
}

}  // namespace qslab
