/*
 * Copyright 2026 The Parallax Blur Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PARALLAX_LAYERING_HPP_
#define PARALLAX_LAYERING_HPP_

#include <span>
#include <utility>
#include <vector>

#include "parallax/geometry.hpp"
#include "parallax/raster.hpp"

namespace parallax {

// Depth map split into equal-blur layers. Layer 0 is the farthest.
struct LayerDecomposition {
  DepthSequence sequence;
  LabelRaster labels;
  std::vector<double> optimal_depths;
  // Filled by build_mattes().
  std::vector<FloatRaster> extended_masks;
  std::vector<FloatRaster> zbuffers;
  std::vector<FloatRaster> mattes;

  int layer_count() const { return sequence.size(); }
};

// Label 0 where depth >= D_0, label l where D_l < depth <= D_{l-1}; depths
// below the last edge are clamped to the last layer.
LabelRaster assign_regions(const DepthMap& depth, const DepthSequence& sequence);

// Rectangular dilation by `support`, then a Gaussian window of the same size
// (renormalized inside the window), clipped to [0,1]. Support must be odd.
FloatRaster extend_region(const MaskRaster& mask, std::pair<int, int> support,
                          double sigma);

// M_l = prod_{l' > l} (1 - R_l'). Index 0 is the farthest layer.
std::vector<FloatRaster> z_buffers(std::span<const FloatRaster> extended_masks);

// A_l = R_l M_l / sum_k R_k M_k.
std::vector<FloatRaster> alpha_mattes(std::span<const FloatRaster> extended_masks,
                                      std::span<const FloatRaster> zbuffers);

// Mean depth of each layer. Empty layers take the midpoint of their band
// (D_0 itself for layer 0).
std::vector<double> optimal_layer_depths(const DepthMap& depth,
                                         const LabelRaster& labels,
                                         const DepthSequence& sequence);

// Labels and optimal depths only.
LayerDecomposition partition_depth(const DepthMap& depth, DepthSequence sequence);

// Extended masks, z-buffers and mattes for the given per-layer kernel
// supports (odd sizes).
void build_mattes(LayerDecomposition& layers,
                  std::span<const std::pair<int, int>> supports, double sigma);

MaskRaster layer_mask(const LabelRaster& labels, int layer);

}  // namespace parallax

#endif  // PARALLAX_LAYERING_HPP_
