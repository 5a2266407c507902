use crate::gf2::BitVector;

/// Maps a syndrome (ordered X checks then Z checks) to a `2n`-bit error estimate.
///
/// Implementations must be pure: the same syndrome always gives the same estimate.
pub trait Decoder: Sync {
    fn name(&self) -> &str;

    fn decode(&self, syndrome: &BitVector) -> BitVector;

    /// Batched decoding; neural decoders override this to share work.
    fn decode_batch(&self, syndromes: &[BitVector]) -> Vec<BitVector> {
        syndromes.iter().map(|s| self.decode(s)).collect()
    }
}
