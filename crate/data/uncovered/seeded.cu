#include <stdio.h>
#include <cuda_runtime.h>

#define N 1024

__constant__ float coeffs[16];

__global__ void scale(float *out, const float *in, int n)
{
    int i = blockIdx.x * blockDim.x + threadIdx.x;
    if (i < n)
        out[i] = in[i] * coeffs[i % 16];
}

int main(void)
{
    float host_in[N], host_out[N], host_coeffs[16];
    float *d_in;
    float *d_out;
    cudaStream_t stream;
    cudaEvent_t start;
    int devices;

    for (int i = 0; i < N; i++)
        host_in[i] = (float)i;
    for (int i = 0; i < 16; i++)
        host_coeffs[i] = 1.0f / (i + 1);

    cudaGetDeviceCount(&devices);
    cudaStreamCreate(&stream);
    cudaEventCreate(&start);

    cudaMalloc((void **)&d_in, N * sizeof(float));
    cudaMalloc((void **)&d_out, N * sizeof(float));
    cudaMemset(d_out, 0, N * sizeof(float));
    cudaMemcpyToSymbol(coeffs, host_coeffs, sizeof(host_coeffs));
    cudaMemcpy(d_in, host_in, N * sizeof(float), cudaMemcpyHostToDevice);

    dim3 block(256);
    dim3 grid(N / 256);
    scale<<<grid, block>>>(d_out, d_in, N);
    cudaDeviceSynchronize();

    cudaMemcpy(host_out, d_out, N * sizeof(float), cudaMemcpyDeviceToHost);
    printf("%f\n", host_out[N - 1]);

    cudaFree(d_in);
    cudaFree(d_out);
    return 0;
}
