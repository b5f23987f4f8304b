// Generated by tests/oracles/gen_vectors.py. Do not edit by hand.
#pragma once
#include <cstdint>

namespace oracle {

inline constexpr std::uint64_t kDjbZero = 0x22491152BDCB7F05ULL;
inline constexpr std::uint64_t kDjbDoc1 = 0x84C5E3F1F6496ACCULL;  // 2001:db8::1
inline constexpr std::uint64_t kDjbDoc2 = 0x84C5E3F1F6496ACDULL;  // 2001:db8::2

struct DesVector { std::uint64_t key, plain, cipher; };
inline constexpr DesVector kDesVectors[] = {
    {0x0123456789ABCDEFULL, 0x4E6F772069732074ULL, 0x3FA40E8A984D4815ULL},
    {0xD1A6E55E9B9B1325ULL, 0x566BF9D7C55A45F8ULL, 0xD217F3987CFDBC6CULL},
    {0xCF0C26EF4243ED52ULL, 0x5D96CF7F265BEDA9ULL, 0x8B66B84D37C975D4ULL},
    {0xC1D77CFFB7DECC0CULL, 0x5E6A0A2EDD70E34DULL, 0x2EAF774979E545E7ULL},
    {0x0463513755AC0ECDULL, 0xB37523A53B4A3EE2ULL, 0x98943F52B9871D07ULL},
    {0x4DE45321AD915A36ULL, 0x9823BEB1E6BA3AD7ULL, 0x70660E4DF603317DULL},
    {0xDD4EABBD1FCFB980ULL, 0x683447C10CC8AF11ULL, 0xE2B410FF59BDBB31ULL},
    {0xBFB637DD5BAE2D26ULL, 0xAED09B824CA87FC2ULL, 0x5CDD999B2D543693ULL},
    {0x158D003D9A0B2361ULL, 0x1FF135342E825CE1ULL, 0xC5BF25D3E10F9509ULL},
};

struct ToyVector { std::uint16_t key, plain, cipher; };
inline constexpr ToyVector kToyVectors[] = {
    {0x0000ULL, 0x0000ULL, 0x2C6EULL},
    {0x1A2BULL, 0x0000ULL, 0xE11EULL},
    {0x1A2BULL, 0xBEEFULL, 0x6940ULL},
    {0xFFFFULL, 0x1234ULL, 0x2ABCULL},
    {0x07F0ULL, 0x33F5ULL, 0xBAF0ULL},
    {0x53A2ULL, 0x00D9ULL, 0x8F1EULL},
    {0x3C23ULL, 0x4CC3ULL, 0xD167ULL},
    {0x4D14ULL, 0xD330ULL, 0x40A5ULL},
};

// sa 2001:db8::a, prefix 2001:da8::/64, key 0123456789abcdef,
// t0 1600000000000, X 5 ms, now 1700000000123
inline constexpr std::int64_t kFullT0 = 1600000000000;
inline constexpr std::int64_t kFullStep = 5;
inline constexpr std::int64_t kFullNow = 1700000000123;
inline constexpr std::uint64_t kFullSalt = 20000000024ULL;
inline constexpr std::uint64_t kFullSuffix = 0x2697788C066EA765ULL;
inline constexpr const char* kFullAddress = "2001:da8::2697:788c:66e:a765";
inline constexpr bool kFlippedBitVerifies = false;

inline constexpr double kEntropyThreeOne = 0.2028195311147832;
inline constexpr double kChiOneCell2560 = 652800.0;
inline constexpr double kScanTime64P1e4 = 322122.5472;
inline constexpr double kMargin64P1e4 = 50.71228762045055;
inline constexpr double kMargin50P1e4 = 36.71228762045055;
inline constexpr double kMargin48P1e4 = 34.71228762045055;

}  // namespace oracle
