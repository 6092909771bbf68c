#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "prdsim/cascade/ledger.hpp"
#include "prdsim/errors.hpp"
#include "prdsim/field/complex_field.hpp"
#include "prdsim/field/optics.hpp"
#include "prdsim/field/propagate.hpp"
#include "prdsim/field/transmittance.hpp"

namespace prdsim {

using ChainElement = std::variant<MediumSegment, Transmittance>;

/// Ordered media and object insertions along one optical path.
class ElementChain {
public:
  explicit ElementChain(std::vector<ChainElement> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidArgument("element chain is empty");
    for (const ChainElement& e : elements_)
      if (const auto* s = std::get_if<MediumSegment>(&e)) make_segment(s->length, s->index);
  }

  const std::vector<ChainElement>& elements() const { return elements_; }

  /// Ledger over all media, ignoring insertions.
  PathLedger total_ledger() const {
    PathLedger total;
    for (const ChainElement& e : elements_)
      if (const auto* s = std::get_if<MediumSegment>(&e)) total += segment_ledger(*s);
    return total;
  }

private:
  std::vector<ChainElement> elements_;
};

namespace detail {

/// Smallest j >= first (within the run) such that the diffraction lengths of
/// segments first..j sum to zero, or npos.
inline std::size_t find_null_run(const std::vector<MediumSegment>& run, std::size_t first) {
  double acc = 0.0;
  double scale = 0.0;
  for (std::size_t j = first; j < run.size(); ++j) {
    const double zb = run[j].length / run[j].index;
    acc += zb;
    scale += std::abs(zb);
    if (j > first && std::abs(acc) <= 1e-12 * scale) return j;
  }
  return static_cast<std::size_t>(-1);
}

} // namespace detail

/// Propagates a field through the chain in order: each medium is a Fresnel
/// hop with (n l, l / n), each insertion multiplies by T(x). Consecutive media
/// whose diffraction lengths cancel are applied as one delta kernel, i.e.
/// the input times exp(i k0 sum n l).
inline ComplexField cascade_propagate(const OpticsContext& ctx, const ComplexField& field,
                                      const ElementChain& chain, Method method = Method::automatic) {
  ComplexField current = field;
  std::vector<MediumSegment> run;

  auto flush = [&]() {
    std::size_t i = 0;
    while (i < run.size()) {
      const std::size_t j = detail::find_null_run(run, i);
      if (j != static_cast<std::size_t>(-1)) {
        double z = 0.0;
        for (std::size_t k = i; k <= j; ++k) z += run[k].index * run[k].length;
        current = propagate(ctx, current, z, 0.0, method);
        i = j + 1;
      } else {
        const PathLedger l = segment_ledger(run[i]);
        current = propagate(ctx, current, l.optical_path, l.diffraction_length, method);
        ++i;
      }
    }
    run.clear();
  };

  for (const ChainElement& e : chain.elements()) {
    if (const auto* s = std::get_if<MediumSegment>(&e)) {
      run.push_back(*s);
    } else {
      flush();
      current = std::get<Transmittance>(e).apply(current);
    }
  }
  flush();
  return current;
}

} // namespace prdsim
