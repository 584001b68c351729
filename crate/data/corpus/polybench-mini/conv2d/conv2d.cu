#include <stdio.h>
#include <stdlib.h>

#define NI 4096
#define NJ 4096
#define DATA_TYPE float

__global__ void Convolution2D_kernel(DATA_TYPE *A, DATA_TYPE *B)
{
    int j = blockIdx.x * blockDim.x + threadIdx.x;
    int i = blockIdx.y * blockDim.y + threadIdx.y;

    DATA_TYPE c11, c12, c13, c21, c22, c23, c31, c32, c33;

    c11 = +0.2;  c21 = +0.5;  c31 = -0.8;
    c12 = -0.3;  c22 = +0.6;  c32 = -0.9;
    c13 = +0.4;  c23 = +0.7;  c33 = +0.10;

    if ((i < NI-1) && (j < NJ-1) && (i > 0) && (j > 0))
    {
        B[i * NJ + j] = c11 * A[(i - 1) * NJ + (j - 1)] + c21 * A[(i - 1) * NJ + (j + 0)] + c31 * A[(i - 1) * NJ + (j + 1)]
            + c12 * A[(i + 0) * NJ + (j - 1)] + c22 * A[(i + 0) * NJ + (j + 0)] + c32 * A[(i + 0) * NJ + (j + 1)]
            + c13 * A[(i + 1) * NJ + (j - 1)] + c23 * A[(i + 1) * NJ + (j + 0)] + c33 * A[(i + 1) * NJ + (j + 1)];
    }
}

void convolution2DCuda(DATA_TYPE* A, DATA_TYPE* B)
{
    DATA_TYPE *A_gpu;
    DATA_TYPE *B_gpu;

    cudaMalloc((void **)&A_gpu, sizeof(DATA_TYPE) * NI * NJ);
    cudaMalloc((void **)&B_gpu, sizeof(DATA_TYPE) * NI * NJ);
    cudaMemcpy(A_gpu, A, sizeof(DATA_TYPE) * NI * NJ, cudaMemcpyHostToDevice);

    dim3 block(32, 8);
    dim3 grid((size_t)ceil(((float)NI) / ((float)block.x)), (size_t)ceil(((float)NJ) / ((float)block.y)));

    Convolution2D_kernel <<< grid, block >>> (A_gpu, B_gpu);
    cudaThreadSynchronize();

    cudaMemcpy(B, B_gpu, sizeof(DATA_TYPE) * NI * NJ, cudaMemcpyDeviceToHost);

    cudaFree(A_gpu);
    cudaFree(B_gpu);
}

int main(int argc, char *argv[])
{
    DATA_TYPE* A = (DATA_TYPE*)malloc(NI * NJ * sizeof(DATA_TYPE));
    DATA_TYPE* B = (DATA_TYPE*)malloc(NI * NJ * sizeof(DATA_TYPE));

    for (int i = 0; i < NI; ++i)
        for (int j = 0; j < NJ; ++j)
            A[i * NJ + j] = (float)rand() / RAND_MAX;

    convolution2DCuda(A, B);
    free(A);
    free(B);
    return 0;
}
