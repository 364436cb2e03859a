int res = 0;
std::sort(a, a + n);
int min_v = a[0];
for(int i=0;i<q;++i) {
  res += min_v;
}
