#include <hls_stream.h>
#include <ap_int.h>

void top_module(hls::stream<ap_uint<8>>& in, hls::stream<ap_uint<8>>& out, int n) {
#pragma HLS INTERFACE axis port=in
#pragma HLS INTERFACE axis port=out
    for (int i = 0; i < n; i++) {
#pragma HLS PIPELINE II=1
        ap_uint<8> v = in.read();
        out.write(v);
    }
}
