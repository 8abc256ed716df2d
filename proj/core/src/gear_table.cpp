#include "dsr/chunker.hpp"

namespace dsr {

// clang-format off
const uint64_t kGearTable[256] = {
    0x6e340b9cffb37a98ull, 0x4bf5122f344554c5ull, 0xdbc1b4c900ffe48dull, 0x084fed08b978af4dull,
    0xe52d9c508c502347ull, 0xe77b9a9ae9e30b0dull, 0x67586e98fad27da0ull, 0xca358758f6d27e6cull,
    0xbeead77994cf5733ull, 0x2b4c342f5433ebe5ull, 0x01ba4719c80b6fe9ull, 0xe7cf46a078fed4faull,
    0xef6cbd2161eaea79ull, 0x9d1e0e2d9459d065ull, 0x4d7b3ef7300acf70ull, 0xdc0e9c3658a1a3edull,
    0xc555eab45d08845aull, 0x4a64a107f0cb3253ull, 0xf299791cddd3d666ull, 0xab897fbdedfa502bull,
    0x83891d7fe85c33e5ull, 0x2f0fd1e89b8de1d5ull, 0x7cb7c4547cf26535ull, 0x8f11b05da785e43eull,
    0x452ba1ddef80246cull, 0x68aa2e2ee5dff96eull, 0x58f7b0780592032eull, 0x77adfc95029e73b1ull,
    0xbd4fc42a21f1f860ull, 0x1f18d650d205d71dull, 0x9652595f37edd08cull, 0xffe679bb831c95b6ull,
    0x36a9e7f1c95b82ffull, 0xbb7208bc9b5d7c04ull, 0x8a331fdde7032f33ull, 0x334359b90efed75dull,
    0x09fc96082d34c2dfull, 0xbbf3f11cb5b43e70ull, 0x951dcee3a7a4f3aaull, 0x265fda17a34611b1ull,
    0x32ebb1abcc1c601cull, 0xba5ec51d07a4ac0eull, 0x684888c0ebb17f37ull, 0xa318c24216defe20ull,
    0xd03502c43d74a30bull, 0x3973e022e93220f9ull, 0xcdb4ee2aea69cc6aull, 0x8a5edab282632443ull,
    0x5feceb66ffc86f38ull, 0x6b86b273ff34fce1ull, 0xd4735e3a265e16eeull, 0x4e07408562bedb8bull,
    0x4b227777d4dd1fc6ull, 0xef2d127de37b942bull, 0xe7f6c011776e8db7ull, 0x7902699be42c8a8eull,
    0x2c624232cdd22177ull, 0x19581e27de7ced00ull, 0xe7ac0786668e0ff0ull, 0x41b805ea7ac014e2ull,
    0xdabd3aff769f07ebull, 0x380918b946a52664ull, 0x62b67e1f685b7fefull, 0x8a8de823d5ed3e12ull,
    0xc3641f8544d7c02full, 0x559aead08264d579ull, 0xdf7e70e5021544f4ull, 0x6b23c0d5f35d1b11ull,
    0x3f39d5c348e5b79dull, 0xa9f51566bd6705f7ull, 0xf67ab10ad4e4c531ull, 0x333e0a1e27815d0cull,
    0x44bd7ae60f478faeull, 0xa83dd0ccbffe39d0ull, 0x6da43b944e494e88ull, 0x86be9a55762d316aull,
    0x72dfcfb0c470ac25ull, 0x08f271887ce94707ull, 0x8ce86a6ae65d3692ull, 0xc4694f2e93d5c4e7ull,
    0x5c62e091b8c0565full, 0x4ae81572f06e1b88ull, 0x8c2574892063f995ull, 0x8de0b3c47f112c59ull,
    0xe632b7095b0bf32cull, 0xa25513c7e0f6eaa8ull, 0xde5a6f78116eca62ull, 0xfcb5f40df9be6baeull,
    0x4b68ab3847feda7dull, 0x18f5384d58bcb1bbull, 0xbbeebd879e1dff69ull, 0x245843abef9e72e7ull,
    0xa9253dc8529dd214ull, 0xcfae0d4248f7142full, 0x74cd9ef9c7e15f57ull, 0xd2e2adf7177b7a8aull,
    0x8d33f520a3c4cef8ull, 0xca978112ca1bbdcaull, 0x3e23e8160039594aull, 0x2e7d2c03a9507ae2ull,
    0x18ac3e7343f01689ull, 0x3f79bb7b435b0532ull, 0x252f10c83610ebcaull, 0xcd0aa9856147b6c5ull,
    0xaaa9402664f1a41full, 0xde7d1b721a1e0632ull, 0x189f40034be7a199ull, 0x8254c329a92850f6ull,
    0xacac86c0e609ca90ull, 0x62c66a7a5dd70c31ull, 0x1b16b1df538ba12dull, 0x65c74c15a686187bull,
    0x148de9c5a7a44d19ull, 0x8e35c2cd3bf6641bull, 0x454349e422f05297ull, 0x043a718774c572bdull,
    0xe3b98a4da31a127dull, 0x0bfe935e70c321c7ull, 0x4c94485e0c21ae6cull, 0x50e721e49c013f00ull,
    0x2d711642b726b044ull, 0xa1fce4363854ff88ull, 0x594e519ae499312bull, 0x021fb596db81e6d0ull,
    0xcbe5cfdf7c2118a9ull, 0xd10b36aa74a59bcfull, 0x7ace431cb61584cbull, 0x620bfdaa346b088full,
    0x76be8b528d0075f7ull, 0x591b7cc95037822dull, 0xa5ab782c805e8bfbull, 0x5ee0dd4d4840229full,
    0xaaa8e61e7faf37ddull, 0xc00e7f889cfc9216ull, 0x3cbdaf66b3dd2b17ull, 0x4bfa260a661d6811ull,
    0x4f362f9093bb8e70ull, 0xe9b0c031f0493d3full, 0x2d31936919341244ull, 0x3ebe1b59762a1c80ull,
    0x9defb0a9e163278bull, 0x075198bfe61765d3ull, 0x949f94d858ef6ad1ull, 0x5e37305c587caf07ull,
    0x9e076ceaf246b600ull, 0x7da59d0dfbe21f43ull, 0x956062137518b270ull, 0xd16bd22f7196c0a7ull,
    0x67c872d4912c71f1ull, 0x5bad0d1132ac152cull, 0x84873854dba02cf6ull, 0x2a0ab732b4e9d85eull,
    0x79bec7ff3e69d1b4ull, 0xfd9528b920d6d395ull, 0x0605d1534eb8995full, 0x8d36bbb3d6fbf24full,
    0x6e3faf1e27d45fcaull, 0x9d277175737fb500ull, 0x35af2d15ebde4d67ull, 0x1f184f101c67d585ull,
    0xc19a797fa1fd590cull, 0x8a8950f762366322ull, 0x0a43b22d89fa2499ull, 0x6d90fbacc073ee0bull,
    0x88aa3e3b1f22c616ull, 0x6922e93e3827642cull, 0xfe1dcd3abfcd6b16ull, 0x2dbf9365a0b09d85ull,
    0x74e1ade320c66075ull, 0x9e8e8c37a53bac77ull, 0xbceef655b5a03491ull, 0x087d80f7f182dd44ull,
    0xee6bb86b44339392ull, 0x22adaf058a2cb668ull, 0x19753a9b7681b361ull, 0x5a6e7a4754af8e7full,
    0xf4f97c88c409dcf3ull, 0x149488d869cbef08ull, 0x9be3799f24592e94ull, 0x65f15821061635e6ull,
    0x27952171c7fcdf0dull, 0x892f60b39450a0e7ull, 0xca41841c5c98e34full, 0x4d6a8e90039fc978ull,
    0xd3bb0d59e354ea84ull, 0x04d6c0c946716aacull, 0x281c93990bac2c69ull, 0xcbecda1c7d37d4c0ull,
    0x26e5bfe4b0686167ull, 0x68325720aabd7c82ull, 0x478508483cbb05deull, 0xb12dc850a3b0a3b7ull,
    0xe4ff5e7d7a7f08e9ull, 0xd1bbd73bb09190bfull, 0xc557e71380112b98ull, 0xae3f4619b0413d70ull,
    0xd1211001882d2ce1ull, 0x5a0ec31daa84fa27ull, 0x49994461d6b46390ull, 0x3340883aad3038ddull,
    0x7c5bd2d144fdde49ull, 0x4fb733bedb74fec8ull, 0x13598656f10fa962ull, 0x383e5d7d58caa41cull,
    0x1dd8312636f6a0bfull, 0x9a7b7b3a5d50781bull, 0xc337ded6f56c0720ull, 0x7a4a4b50f5121ed5ull,
    0xd4b0c0a4a8cc6c25ull, 0xb5c9a5f48292e3fbull, 0x85f97e04d754c81dull, 0x28969cdfa74a12c8ull,
    0x528a84ce6b18eb7dull, 0xcdce9374e0fecee1ull, 0x0a2c6ea0370d1d49ull, 0x414a21e525a759e3ull,
    0xaf193a8cdcd0e3fbull, 0x19152ddfba193b5bull, 0x5d5c7d20a3aab9c1ull, 0xb7d25296e7bc6a6bull,
    0xfb95aa98d6e6c582ull, 0x2795044ce0f83f71ull, 0x7941cb07924fdc7bull, 0x2ea970ff63aec5d7ull,
    0x7d8c5da7fd418379ull, 0xf031efa58744e97aull, 0x30a5bfa58e128af9ull, 0x457e4854863e7efaull,
    0x5e1effe9b7bab73dull, 0xab61ba11a38b007full, 0x0a3aaee7ccfb1a64ull, 0xd0752b60adb148caull,
    0xe6f207509afa3908ull, 0xde2e331d891ae267ull, 0x3ad4e44a4306fb62ull, 0xf8d20e598df20877ull,
    0x45f83d17e10b34fcull, 0xf3df1f9c358ae8ecull, 0x94455e3ed9f716beull, 0x4d4d75d742863ab9ull,
    0xfde502858306c235ull, 0xd4f09e5c5af99a24ull, 0x966c7c47125c7457ull, 0x782e02029374527bull,
    0x2017ff3461395672ull, 0x27abdeddfe850349ull, 0xb0b2988b6bbe724bull, 0x50868f20258bbc9cull,
    0xe596a8e5c49dd20aull, 0xd52022534fa2dba3ull, 0xaa7225e7d5b0a255ull, 0x04b8d34e20e604caull,
    0x98722e2ebed8ed3dull, 0x3e151409ace91cb3ull, 0xaa687b58b0e73e2eull, 0xa8100ae6aa1940d0ull,};
// clang-format on

}  // namespace dsr
