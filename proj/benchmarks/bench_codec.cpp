#include <benchmark/benchmark.h>

#include "addrless/cipher.hpp"
#include "addrless/codec.hpp"

namespace {

using namespace addrless;

const SaltParams kParams{0, 5, VerifyWindow::symmetric(10'000)};
const RoutingPrefix kPrefix = RoutingPrefix::parse("2001:da8::/64");
const Ipv6Address kSource = Ipv6Address::from_string("2001:db8::a");
constexpr TimeMs kNow = 1'700'000'000'000;

void BM_Djb2(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hash_source(kSource));
}
BENCHMARK(BM_Djb2);

void BM_DesEncrypt(benchmark::State& state) {
  const auto cipher = make_cipher(CipherKind::ReferenceDes, CipherKey::from_u64(0x0123456789ABCDEFULL));
  std::uint64_t block = 0x4E6F772069732074ULL;
  for (auto _ : state) {
    block = cipher->encrypt(block);
    benchmark::DoNotOptimize(block);
  }
}
BENCHMARK(BM_DesEncrypt);

void BM_Generate(benchmark::State& state) {
  const AddressCodec codec(CipherKind::ReferenceDes, CipherKey::from_u64(0x0123456789ABCDEFULL), kParams);
  TimeMs now = kNow;
  for (auto _ : state) {
    benchmark::DoNotOptimize(codec.generate(kSource, kPrefix, now));
    now += 5;
  }
}
BENCHMARK(BM_Generate);

void BM_Verify(benchmark::State& state) {
  const AddressCodec codec(CipherKind::ReferenceDes, CipherKey::from_u64(0x0123456789ABCDEFULL), kParams);
  const auto dst = codec.generate(kSource, kPrefix, kNow);
  for (auto _ : state) benchmark::DoNotOptimize(codec.verify(kSource, dst, kPrefix, kNow + 50));
}
BENCHMARK(BM_Verify);

// Includes key schedule setup, as a one-shot caller would pay it.
void BM_GenerateOneShot(benchmark::State& state) {
  const auto key = CipherKey::from_u64(0x0123456789ABCDEFULL);
  for (auto _ : state) benchmark::DoNotOptimize(generate_address(kSource, kPrefix, key, kParams, kNow));
}
BENCHMARK(BM_GenerateOneShot);

}  // namespace

BENCHMARK_MAIN();
