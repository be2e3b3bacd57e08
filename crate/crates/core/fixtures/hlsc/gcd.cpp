#include <ap_int.h>

ap_uint<16> gcd(ap_uint<16> a, ap_uint<16> b) {
    while (b != 0) {
        ap_uint<16> t = b;
        b = a % b;
        a = t;
    }
    return a;
}

void top_module(ap_uint<16> a, ap_uint<16> b, ap_uint<16>& g) {
    g = gcd(a, b);
}
