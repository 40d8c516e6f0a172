#ifndef BDISK_RANDOM_HPP_
#define BDISK_RANDOM_HPP_

#include <Eigen/Core>
#include <array>
#include <cstdint>

namespace bdisk {

// Counter-based generator (Philox4x32-10). The output is a pure function of
// (seed, stream_id, counter), so replicas sampled on different threads are
// reproducible regardless of scheduling.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32();
  // Uniform on the open interval (0, 1), 53 bits.
  double uniform();
  double normal();
  double exponential(double rate);

  void fill_normal(Eigen::Ref<Eigen::VectorXd> out);

  // Independent stream derived from this one's identity (not its position).
  RandomStream substream(std::uint64_t sub_id) const;

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// One Philox4x32-10 block.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// splitmix64 finalizer; used to derive stream ids.
std::uint64_t mix64(std::uint64_t x);

}  // namespace bdisk

#endif  // BDISK_RANDOM_HPP_
