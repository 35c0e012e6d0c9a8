#ifndef MHLAB_SRC_ALGORITHMS_FACTORIES_HPP
#define MHLAB_SRC_ALGORITHMS_FACTORIES_HPP

#include <memory>

#include "mhlab/algorithms.hpp"

namespace mhlab::algo::detail {

using Made = std::unique_ptr<PopulationOptimizer>;

Made make_de(const ParamSet& p, const OptimizerOptions& o);
Made make_ebcm(const ParamSet& p, const OptimizerOptions& o);
Made make_sdcs(const ParamSet& p, const OptimizerOptions& o);
Made make_msca(const ParamSet& p, const OptimizerOptions& o);
Made make_imfo(const ParamSet& p, const OptimizerOptions& o);
Made make_ao(const ParamSet& p, const OptimizerOptions& o);
Made make_igoa(const ParamSet& p, const OptimizerOptions& o);
Made make_hgsa(const ParamSet& p, const OptimizerOptions& o);
Made make_mfla(const ParamSet& p, const OptimizerOptions& o);
Made make_gsk(const ParamSet& p, const OptimizerOptions& o);
Made make_mpa(const ParamSet& p, const OptimizerOptions& o);
Made make_eo(const ParamSet& p, const OptimizerOptions& o);

/// Population positions as a flat list of vectors.
std::vector<Vec> positions_of(const Population& pop);
/// Indices sorted by fitness, ties by index.
std::vector<std::size_t> fitness_order(const Population& pop);

}  // namespace mhlab::algo::detail

#endif
