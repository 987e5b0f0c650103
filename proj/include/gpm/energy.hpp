#pragma once

#include "gpm/instance.hpp"

namespace gpm {

/// Effective unary of segment i taking label l: actor unary + action unary +
/// joint compatibility. Background draws only on the joint table's trailing
/// column.
double unary_energy(const Instance& inst, Index i, Index label);

/// Pairwise energy of one edge with contrast weight w between labels a and b:
/// 0 if both projections agree, potts_actor*w if only the actor differs,
/// potts_action*w if only the action differs, and the product of the two
/// otherwise.
double pair_energy(const Instance& inst, double w, Index a, Index b);

/// Whether actor class x (or, with the second overload, action class y) is
/// supported by the video-level activation.
bool actor_supported(const Instance& inst, const VideoLabels& v, Index x);
bool action_supported(const Instance& inst, const VideoLabels& v, Index y);

/// Dominant actor/action projection over the members of node t under L,
/// by segment count; ties go to the lowest class index, and the null
/// projection (background, whose label sorts last) only wins outright.
/// Returns -1 when background strictly dominates.
Index dominant_actor(const Instance& inst, Index t, const Labeling& L);
Index dominant_action(const Instance& inst, Index t, const Labeling& L);

/// Natural-log entropy of the joint-label frequencies over the members of
/// node t.
double label_entropy(const Instance& inst, Index t, const Labeling& L);

/// Segment-level CRF: sum of effective unaries plus one pairwise term per
/// undirected edge.
double segment_crf_energy(const Labeling& L, const Instance& inst);

/// Video-level terms: the thresholded response unary for each active class
/// plus a cost of theta_V for every actor and action class present in L but
/// unsupported by v. Background contributes to no presence indicator.
double video_level_energy(const Labeling& L, const VideoLabels& v, const Instance& inst);

/// Grouping cue of node t: (entropy * voxel size + theta_h) when active,
/// 0 otherwise.
double grouping_energy(Index t, const Labeling& L, bool active, const Instance& inst);

/// theta_tau per root-to-leaf path whose activation sum differs from one.
double slice_penalty(const Slice& s, const PathMatrix& pm, const Instance& inst);

/// Refinement cue of an active node t: theta_t per unordered member pair with
/// differing actor projections when the dominant actor is video-supported,
/// plus the analogous action term. Inactive nodes contribute 0.
double gpm_refine_energy(Index t, const Labeling& L, const VideoLabels& v, bool active,
                         const Instance& inst);

/// Full model energy: segment CRF + video-level terms + slice penalty +
/// per-node refinement and grouping cues.
double total_energy(const Labeling& L, const Slice& s, const VideoLabels& v,
                    const Instance& inst);

} // namespace gpm
