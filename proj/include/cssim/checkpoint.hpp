#ifndef CSSIM_CHECKPOINT_HPP
#define CSSIM_CHECKPOINT_HPP

#include <string>

#include "cssim/representation.hpp"
#include "cssim/state.hpp"

namespace cssim {

/// Raw state checkpoint: little-endian binary, magic "CSSIM1", a 64-bit
/// length-prefixed UTF-8 JSON metadata block (model, grid, time, field list
/// with shapes), then the float64 arrays in field-list order, row-major.
/// Complex fields store (re, im) pairs as the innermost axis.
void write_checkpoint(const std::string& path, const SimState& s, ModelKind model);

struct Checkpoint {
  SimState state;
  ModelKind model = ModelKind::csh_abelian;
};

/// Reads a checkpoint; throws std::runtime_error on format or size errors.
Checkpoint read_checkpoint(const std::string& path);

}  // namespace cssim

#endif
