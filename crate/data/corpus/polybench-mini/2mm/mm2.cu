/* 2-D matrix multiplication: C = A * B */
#include <stdio.h>
#include <stdlib.h>

#define NI 512
#define NJ 512
#define NK 512

__global__ void mm2_kernel1(float *A, float *B, float *C) {
    int j = blockIdx.x * blockDim.x + threadIdx.x;
    int i = blockIdx.y * blockDim.y + threadIdx.y;
    int k;

    if ((i < NI) && (j < NJ)) {
        for (k = 0; k < NK; k++) {
            C[i * NJ + j] += A[i * NK + k] * B[k * NJ + j];
        }
    }
}

void mm2Cuda(float* A, float* B, float* C) {
    float *A_gpu;
    float *B_gpu;
    float *C_gpu;

    cudaMalloc((void **)&A_gpu, sizeof(float) * NI * NK);
    cudaMalloc((void **)&B_gpu, sizeof(float) * NK * NJ);
    cudaMalloc((void **)&C_gpu, sizeof(float) * NI * NJ);
    cudaMemcpy(A_gpu, A, sizeof(float) * NI * NK, cudaMemcpyHostToDevice);
    cudaMemcpy(B_gpu, B, sizeof(float) * NK * NJ, cudaMemcpyHostToDevice);
    cudaMemcpy(C_gpu, C, sizeof(float) * NI * NJ, cudaMemcpyHostToDevice);

    dim3 block(32, 8);
    dim3 grid(NJ / 32, NI / 8);
    mm2_kernel1<<<grid, block>>>(A_gpu, B_gpu, C_gpu);
    cudaThreadSynchronize();

    cudaMemcpy(C, C_gpu, sizeof(float) * NI * NJ, cudaMemcpyDeviceToHost);
    cudaFree(A_gpu);
    cudaFree(B_gpu);
    cudaFree(C_gpu);
}

int main(int argc, char** argv) {
    float* A = (float*)malloc(NI * NK * sizeof(float));
    float* B = (float*)malloc(NK * NJ * sizeof(float));
    float* C = (float*)calloc(NI * NJ, sizeof(float));
    for (int i = 0; i < NI * NK; i++) {
        A[i] = (float)(i % 7) / 7.0f;
    }
    for (int i = 0; i < NK * NJ; i++) {
        B[i] = (float)(i % 5) / 5.0f;
    }
    mm2Cuda(A, B, C);
    printf("C[0] = %f\n", C[0]);
    free(A);
    free(B);
    free(C);
    return 0;
}
