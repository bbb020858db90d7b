#include "sblfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <optional>
#include <utility>

#include "sblfem/errors.hpp"

namespace sblfem {

std::string_view to_string(MeshBranch branch) {
    switch (branch) {
        case MeshBranch::Asymptotic: return "asymptotic";
        case MeshBranch::RightLayerOnly: return "right-layer";
        case MeshBranch::TwoLayers: return "two-layers";
        case MeshBranch::Uniform: return "uniform";
    }
    return "unknown";
}

double ElementMap::to_physical(double xi) const {
    if (xi <= 0.0) return from_left(1.0 + xi);
    return from_right(1.0 - xi);
}

double ElementMap::to_reference(double x) const {
    // Measure from the nearer endpoint so tiny elements near x = 1 keep their digits.
    const double mid = left + 0.5 * width;
    if (x <= mid) return (x - left) / jacobian() - 1.0;
    return 1.0 - (right - x) / jacobian();
}

Mesh::Mesh(std::vector<double> breakpoints, std::vector<double> widths, MeshKind kind, MeshBranch branch,
           double kappa, int p)
    : breakpoints_(std::move(breakpoints)), widths_(std::move(widths)), kind_(kind), branch_(branch),
      kappa_(kappa), p_(p) {
    if (breakpoints_.size() < 2 || breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
        throw MeshError("mesh breakpoints must start at 0 and end at 1");
    }
    if (widths_.empty()) {
        for (std::size_t j = 0; j + 1 < breakpoints_.size(); ++j) {
            widths_.push_back(breakpoints_[j + 1] - breakpoints_[j]);
        }
    }
    if (widths_.size() + 1 != breakpoints_.size()) throw MeshError("mesh widths do not match breakpoints");
    for (std::size_t j = 0; j + 1 < breakpoints_.size(); ++j) {
        if (!(breakpoints_[j + 1] > breakpoints_[j]) || !(widths_[j] > 0.0)) {
            throw MeshError("mesh element " + std::to_string(j) + " is degenerate");
        }
    }
}

std::size_t Mesh::locate(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("point outside [0, 1]: " + std::to_string(x));
    // first breakpoint >= x; the element to its left owns x
    const auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), x);
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Mesh build_sbl_mesh(const LayerParameters& layer, double kappa, int p) {
    if (!(kappa > 0.0)) throw MeshError("kappa must be positive");
    if (p < 1) throw MeshError("polynomial degree must be >= 1");
    if (!(layer.mu1 > 0.0) || !(layer.mu0 >= 0.0) || layer.mu0 > layer.mu1) {
        throw MeshError("invalid layer parameters");
    }

    const double scale = kappa * static_cast<double>(p);
    const double right_width = scale / layer.mu1;
    if (right_width >= 0.5) {
        return Mesh({0.0, 1.0}, {1.0}, MeshKind::SpectralBoundaryLayer, MeshBranch::Asymptotic, kappa, p);
    }

    const double right_break = 1.0 - scale / layer.mu1;
    if (!(right_break < 1.0)) throw MeshError("right layer element underflows: kappa p / mu1 too small");

    const double left_width = layer.mu0 > 0.0 ? scale / layer.mu0 : std::numeric_limits<double>::infinity();
    if (left_width < 0.5) {
        if (!(left_width < right_break)) {
            throw MeshError("layer elements collide: kappa p / mu0 >= 1 - kappa p / mu1");
        }
        return Mesh({0.0, left_width, right_break, 1.0}, {left_width, right_break - left_width, right_width},
                    MeshKind::SpectralBoundaryLayer, MeshBranch::TwoLayers, kappa, p);
    }
    return Mesh({0.0, right_break, 1.0}, {right_break, right_width}, MeshKind::SpectralBoundaryLayer,
                MeshBranch::RightLayerOnly, kappa, p);
}

Mesh build_uniform_mesh(int n_elements) {
    if (n_elements < 1) throw MeshError("uniform mesh needs at least one element");
    std::vector<double> points(static_cast<std::size_t>(n_elements) + 1);
    for (int i = 0; i <= n_elements; ++i) points[i] = static_cast<double>(i) / n_elements;
    points.back() = 1.0;
    return Mesh(std::move(points), {}, MeshKind::Uniform, MeshBranch::Uniform, 1.0, 0);
}

Mesh common_refinement(const Mesh& a, const Mesh& b) {
    // (x, 1 - x) with 1 - x summed from the stored widths
    auto with_gap = [](const Mesh& m) {
        std::vector<std::pair<double, double>> out(m.breakpoints().size());
        double gap = 0.0;
        for (std::size_t i = out.size(); i-- > 0;) {
            out[i] = {m.breakpoints()[i], gap};
            if (i > 0) gap += m.width(i - 1);
        }
        return out;
    };
    const auto ga = with_gap(a);
    const auto gb = with_gap(b);
    std::vector<std::pair<double, double>> merged;
    std::merge(ga.begin(), ga.end(), gb.begin(), gb.end(), std::back_inserter(merged),
               [](const auto& x, const auto& y) { return x.first < y.first; });
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const auto& x, const auto& y) { return x.first == y.first; }),
                 merged.end());

    auto stored = [](const Mesh& m, double left, double right) -> std::optional<double> {
        const auto bp = m.breakpoints();
        const auto it = std::lower_bound(bp.begin(), bp.end(), left);
        if (it == bp.end() || *it != left || it + 1 == bp.end() || *(it + 1) != right) return std::nullopt;
        return m.width(static_cast<std::size_t>(it - bp.begin()));
    };
    std::vector<double> points, widths;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        points.push_back(merged[i].first);
        if (i + 1 == merged.size()) break;
        const double l = merged[i].first, r = merged[i + 1].first;
        const double fallback = l < 0.5 ? r - l : merged[i].second - merged[i + 1].second;
        widths.push_back(stored(a, l, r).value_or(stored(b, l, r).value_or(fallback)));
    }
    return Mesh(std::move(points), std::move(widths), a.kind(), a.branch(), a.kappa(), a.degree());
}

ElementMap element_map(const Mesh& mesh, std::size_t j) {
    if (j >= mesh.element_count()) {
        throw DomainError("element index " + std::to_string(j) + " out of range (" +
                          std::to_string(mesh.element_count()) + " elements)");
    }
    const auto bp = mesh.breakpoints();
    return ElementMap{j, bp[j], bp[j + 1], mesh.width(j)};
}

std::string format_breakpoints(const Mesh& mesh) {
    std::string out;
    for (double x : mesh.breakpoints()) {
        if (!out.empty()) out += " | ";
        if (x == 0.0 || x == 1.0) {
            out += x == 0.0 ? "0" : "1";
            continue;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.5e", x);
        // trim mantissa zeros and exponent padding: 3.27480e-04 -> 3.2748e-4
        std::string s(buf);
        const auto e = s.find('e');
        std::string mant = s.substr(0, e);
        while (mant.back() == '0') mant.pop_back();
        if (mant.back() == '.') mant.pop_back();
        const int exponent = std::stoi(s.substr(e + 1));
        out += mant + "e" + std::to_string(exponent);
    }
    return out;
}

}  // namespace sblfem
