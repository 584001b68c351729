#include <stdio.h>
#include <stdlib.h>

#define THREADS 256

__device__ float combine(float a, float b)
{
    return a + b;
}

__global__ void reduce0(float *g_idata, float *g_odata, unsigned int n)
{
    __shared__ float sdata[THREADS];

    unsigned int tid = threadIdx.x;
    unsigned int i = blockIdx.x * blockDim.x + threadIdx.x;

    sdata[tid] = (i < n) ? g_idata[i] : 0;
    __syncthreads();

    for (unsigned int s = 1; s < blockDim.x; s *= 2) {
        if ((tid % (2 * s)) == 0) {
            sdata[tid] = combine(sdata[tid], sdata[tid + s]);
        }
        __syncthreads();
    }

    if (tid == 0) g_odata[blockIdx.x] = sdata[0];
}

int main(int argc, char **argv)
{
    unsigned int n = 1 << 20;
    unsigned int bytes = n * sizeof(float);
    int blocks = (n + THREADS - 1) / THREADS;

    float *h_idata = (float *) malloc(bytes);
    for (unsigned int i = 0; i < n; i++) {
        h_idata[i] = (float)(rand() & 0xFF);
    }

    float *d_idata;
    float *d_odata;
    cudaMalloc((void **) &d_idata, bytes);
    cudaMalloc((void **) &d_odata, blocks * sizeof(float));

    cudaMemcpy(d_idata, h_idata, bytes, cudaMemcpyHostToDevice);
    reduce0<<<blocks, THREADS>>>(d_idata, d_odata, n);
    cudaDeviceSynchronize();

    float *h_odata = (float *) malloc(blocks * sizeof(float));
    cudaMemcpy(h_odata, d_odata, blocks * sizeof(float), cudaMemcpyDeviceToHost);

    float sum = 0.0f;
    int b = 0;
    do {
        sum += h_odata[b];
        b++;
    } while (b < blocks);
    printf("sum = %f\n", sum);

    cudaFree(d_idata);
    cudaFree(d_odata);
    free(h_idata);
    free(h_odata);
    return 0;
}
