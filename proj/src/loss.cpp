#include "malc/loss.hpp"

namespace malc {

PhiKind parse_phi(const std::string& name) {
    if (name == "hinge") return PhiKind::hinge;
    if (name == "smooth_hinge" || name == "smooth-hinge") return PhiKind::smooth_hinge;
    if (name == "logistic") return PhiKind::logistic;
    throw Error("unknown phi '" + name + "' (expected hinge, smooth_hinge or logistic)");
}

std::string to_string(PhiKind kind) {
    switch (kind) {
        case PhiKind::hinge:
            return "hinge";
        case PhiKind::smooth_hinge:
            return "smooth_hinge";
        case PhiKind::logistic:
            return "logistic";
    }
    return "unknown";
}

}  // namespace malc
