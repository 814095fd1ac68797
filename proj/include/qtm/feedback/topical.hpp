#pragma once

namespace qtm::feedback {

/// Probability that an occurrence of t in d came from the document's topical Polya rather
/// than the background:
///   (1-omega) a_tau / ((1-omega) a_tau + omega a_c),  a_tau = m_d c/|d|,  a_c = m_c p_t
/// where p_t = df_t / sum df. Zero for absent terms; omega = 0 gives 1, omega = 1 gives 0.
template <typename Scalar>
Scalar topical_prob_spud(Scalar count, Scalar length, Scalar distinct, Scalar omega, Scalar mass,
                         Scalar proportion) {
    if (!(count > Scalar(0)) || omega >= Scalar(1)) return Scalar(0);
    const Scalar topical = (Scalar(1) - omega) * distinct * count / length;
    const Scalar background = omega * mass * proportion;
    return topical / (topical + background);
}

/// The same quantity written as a saturating function of c(t,d):
///   c / (c + (omega m_c p_t) / (1-omega) * |d|/m_d)
/// Exposes the verbosity normalisation |d|/m_d.
template <typename Scalar>
Scalar topical_prob_spud_saturating(Scalar count, Scalar length, Scalar distinct, Scalar omega, Scalar mass,
                                    Scalar proportion) {
    if (!(count > Scalar(0)) || omega >= Scalar(1)) return Scalar(0);
    const Scalar k = omega * mass * proportion / (Scalar(1) - omega) * (length / distinct);
    return count / (count + k);
}

/// Dirichlet-prior counterpart: c / (c + mu p(t|collection)). No document-length term.
template <typename Scalar>
Scalar topical_prob_dir(Scalar count, Scalar mu, Scalar collection_prob) {
    if (!(count > Scalar(0))) return Scalar(0);
    return count / (count + mu * collection_prob);
}

}  // namespace qtm::feedback
