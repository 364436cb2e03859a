int n; scanf("%d", &n);
int v[n];
for(int i=0;i<n;++i) {
  v[i] = i*i;
}
