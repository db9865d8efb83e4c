#include "pollerr/fixtures.hpp"

#include <string_view>

#include "pollerr/errors.hpp"

namespace pollerr {

namespace {

// Published measurement tables, kept verbatim. The 64-run tables carry the
// baseline measurement as std_order 0; the two rows labelled 62/63 keep
// their printed sign patterns (the labels, not the patterns, are the
// transposition).
constexpr std::string_view kExp1Csv = R"(std_order,truth,depth,alts,weight,pop,answers,mape
0,0,0,0,0,0,0,34.04411
1,-1,-1,-1,-1,-1,-1,87.08667
2,1,-1,-1,-1,-1,-1,3.49111
3,-1,1,-1,-1,-1,-1,37.57905
4,1,1,-1,-1,-1,-1,4.90007
5,-1,-1,1,-1,-1,-1,47.75
6,1,-1,1,-1,-1,-1,6.58
7,-1,1,1,-1,-1,-1,76.73124
8,1,1,1,-1,-1,-1,8.56657
9,-1,-1,-1,1,-1,-1,7365.33667
10,1,-1,-1,1,-1,-1,96.20333
11,-1,1,-1,1,-1,-1,1228.76234
12,1,1,-1,1,-1,-1,19.77456
13,-1,-1,1,1,-1,-1,1456.40333
14,1,-1,1,1,-1,-1,18.47
15,-1,1,1,1,-1,-1,405.1528
16,1,1,1,1,-1,-1,3.74374
17,-1,-1,-1,-1,1,-1,90.03673
18,1,-1,-1,-1,1,-1,1.21997
19,-1,1,-1,-1,1,-1,39.38121
20,1,1,-1,-1,1,-1,4.38645
21,-1,-1,1,-1,1,-1,47.13567
22,1,-1,1,-1,1,-1,7.02496
23,-1,1,1,-1,1,-1,75.60747
24,1,1,1,-1,1,-1,8.34256
25,-1,-1,-1,1,1,-1,7362.4095
26,1,-1,-1,1,1,-1,98.25777
27,-1,1,-1,1,1,-1,1240.11986
28,1,1,-1,1,1,-1,19.7394
29,-1,-1,1,1,1,-1,1466.18583
30,1,-1,1,1,1,-1,18.8858
31,-1,1,1,1,1,-1,403.33846
32,1,1,1,1,1,-1,4.16551
33,-1,-1,-1,-1,-1,1,61.83111
34,1,-1,-1,-1,-1,1,8.08626
35,-1,1,-1,-1,-1,1,88.29154
36,1,1,-1,-1,-1,1,9.66657
37,-1,-1,1,-1,-1,1,63.75222
38,1,-1,1,-1,-1,1,8.2323
39,-1,1,1,-1,-1,1,89.69907
40,1,1,1,-1,-1,1,10.02583
41,-1,-1,-1,1,-1,1,811.41556
42,1,-1,-1,1,-1,1,10.13037
43,-1,1,-1,1,-1,1,310.01569
44,1,1,-1,1,-1,1,2.16437
45,-1,-1,1,1,-1,1,738.71667
46,1,-1,1,1,-1,1,9.07111
47,-1,1,1,1,-1,1,300.02957
48,1,1,1,1,-1,1,2.1328
49,-1,-1,-1,-1,1,1,61.99979
50,1,-1,-1,-1,1,1,7.9004
51,-1,1,-1,-1,1,1,88.42618
52,1,1,-1,-1,1,1,9.84616
53,-1,-1,1,-1,1,1,63.75659
54,1,-1,1,-1,1,1,7.95395
55,-1,1,1,-1,1,1,89.82931
56,1,1,1,-1,1,1,9.95786
57,-1,-1,-1,1,1,1,810.22851
58,1,-1,-1,1,1,1,9.99809
59,-1,1,-1,1,1,1,310.55943
60,1,1,-1,1,1,1,2.44021
61,-1,-1,1,1,1,1,737.21517
62,-1,1,1,1,1,1,299.99379
63,1,-1,1,1,1,1,9.01693
64,1,1,1,1,1,1,2.20558
)";

constexpr std::string_view kExp2Csv = R"(std_order,truth,depth,alts,weight,pop,answers,mape
0,0,0,0,0,0,0,34.04411
1,-0.5,-0.5,-0.5,-0.5,-0.5,-0.5,38.23649
2,0.5,-0.5,-0.5,-0.5,-0.5,-0.5,17.89185
3,-0.5,0.5,-0.5,-0.5,-0.5,-0.5,58.33831
4,0.5,0.5,-0.5,-0.5,-0.5,-0.5,25.18673
5,-0.5,-0.5,0.5,-0.5,-0.5,-0.5,48.15875
6,0.5,-0.5,0.5,-0.5,-0.5,-0.5,25.15229
7,-0.5,0.5,0.5,-0.5,-0.5,-0.5,64.44095
8,0.5,0.5,0.5,-0.5,-0.5,-0.5,27.66351
9,-0.5,-0.5,-0.5,0.5,-0.5,-0.5,81.467
10,0.5,-0.5,-0.5,0.5,-0.5,-0.5,13.00362
11,-0.5,0.5,-0.5,0.5,-0.5,-0.5,9.89232
12,0.5,0.5,-0.5,0.5,-0.5,-0.5,9.41709
13,-0.5,-0.5,0.5,0.5,-0.5,-0.5,56.28555
14,0.5,-0.5,0.5,0.5,-0.5,-0.5,9.56171
15,-0.5,0.5,0.5,0.5,-0.5,-0.5,19.75423
16,0.5,0.5,0.5,0.5,-0.5,-0.5,12.79737
17,-0.5,-0.5,-0.5,-0.5,0.5,-0.5,38.11988
18,0.5,-0.5,-0.5,-0.5,0.5,-0.5,17.97198
19,-0.5,0.5,-0.5,-0.5,0.5,-0.5,58.37657
20,0.5,0.5,-0.5,-0.5,0.5,-0.5,25.14935
21,-0.5,-0.5,0.5,-0.5,0.5,-0.5,48.43102
22,0.5,-0.5,0.5,-0.5,0.5,-0.5,25.08915
23,-0.5,0.5,0.5,-0.5,0.5,-0.5,64.49147
24,0.5,0.5,0.5,-0.5,0.5,-0.5,27.73975
25,-0.5,-0.5,-0.5,0.5,0.5,-0.5,81.24882
26,0.5,-0.5,-0.5,0.5,0.5,-0.5,13.02403
27,-0.5,0.5,-0.5,0.5,0.5,-0.5,9.5234
28,0.5,0.5,-0.5,0.5,0.5,-0.5,9.65797
29,-0.5,-0.5,0.5,0.5,0.5,-0.5,56.3261
30,0.5,-0.5,0.5,0.5,0.5,-0.5,9.79661
31,-0.5,0.5,0.5,0.5,0.5,-0.5,19.70136
32,0.5,0.5,0.5,0.5,0.5,-0.5,12.57202
33,-0.5,-0.5,-0.5,-0.5,-0.5,0.5,52.6255
34,0.5,-0.5,-0.5,-0.5,-0.5,0.5,23.3408
35,-0.5,0.5,-0.5,-0.5,-0.5,0.5,66.96285
36,0.5,0.5,-0.5,-0.5,-0.5,0.5,28.56059
37,-0.5,-0.5,0.5,-0.5,-0.5,0.5,54.63909
38,0.5,-0.5,0.5,-0.5,-0.5,0.5,28.61188
39,-0.5,0.5,0.5,-0.5,-0.5,0.5,68.09695
40,0.5,0.5,0.5,-0.5,-0.5,0.5,29.17961
41,-0.5,-0.5,-0.5,0.5,-0.5,0.5,45.78992
42,0.5,-0.5,-0.5,0.5,-0.5,0.5,4.45637
43,-0.5,0.5,-0.5,0.5,-0.5,0.5,23.87327
44,0.5,0.5,-0.5,0.5,-0.5,0.5,13.78785
45,-0.5,-0.5,0.5,0.5,-0.5,0.5,41.37552
46,0.5,-0.5,0.5,0.5,-0.5,0.5,13.85628
47,-0.5,0.5,0.5,0.5,-0.5,0.5,25.68611
48,0.5,0.5,0.5,0.5,-0.5,0.5,14.47902
49,-0.5,-0.5,-0.5,-0.5,0.5,0.5,52.71001
50,0.5,-0.5,-0.5,-0.5,0.5,0.5,23.2522
51,-0.5,0.5,-0.5,-0.5,0.5,0.5,66.94767
52,0.5,0.5,-0.5,-0.5,0.5,0.5,28.70839
53,-0.5,-0.5,0.5,-0.5,0.5,0.5,54.66564
54,0.5,-0.5,0.5,-0.5,0.5,0.5,28.71268
55,-0.5,0.5,0.5,-0.5,0.5,0.5,68.04705
56,0.5,0.5,0.5,-0.5,0.5,0.5,29.16309
57,-0.5,-0.5,-0.5,0.5,0.5,0.5,45.72794
58,0.5,-0.5,-0.5,0.5,0.5,0.5,4.47782
59,-0.5,0.5,-0.5,0.5,0.5,0.5,23.84796
60,0.5,0.5,-0.5,0.5,0.5,0.5,13.90072
61,-0.5,-0.5,0.5,0.5,0.5,0.5,41.23229
62,-0.5,0.5,0.5,0.5,0.5,0.5,25.70945
63,0.5,-0.5,0.5,0.5,0.5,0.5,13.88817
64,0.5,0.5,0.5,0.5,0.5,0.5,14.41732
)";

constexpr std::string_view kValidationCsv = R"(std_order,truth,depth,alts,weight,pop,answers,mape
0,0,0,0,0,0,0,34.04411
1,0.25,0.00,0.25,0.25,0.25,0.25,20.17603
2,-0.25,0.00,0.25,-0.25,0.25,-0.25,48.18286
3,0.25,0.00,-0.25,-0.25,0.25,-0.25,31.06755
4,-0.25,0.00,0.25,-0.25,-0.25,0.25,50.33476
5,0.25,0.00,-0.25,0.25,0.25,0.25,19.59611
6,-0.25,0.00,0.25,0.25,0.25,0.25,27.66037
7,-0.25,0.00,-0.25,-0.25,0.25,-0.25,46.24753
8,-0.25,0.00,-0.25,0.25,0.25,0.25,26.60268
9,0.25,0.00,-0.25,0.25,0.25,-0.25,17.30670
10,-0.25,0.00,0.25,0.25,-0.25,-0.25,25.07704
11,-0.25,0.00,-0.25,-0.25,0.25,-0.25,46.36067
12,-0.25,0.00,-0.25,-0.25,0.25,-0.25,46.18749
13,0.25,0.00,-0.25,0.25,-0.25,0.25,19.71108
14,0.25,0.00,-0.25,-0.25,-0.25,0.25,33.26383
15,-0.25,0.00,0.25,-0.25,-0.25,-0.25,48.09976
16,-0.25,0.00,0.25,0.25,-0.25,0.25,27.58968
17,-0.25,0.00,-0.25,0.25,0.25,-0.25,22.55290
18,-0.25,0.00,0.25,0.25,0.25,-0.25,24.97823
19,0.25,0.00,-0.25,0.25,0.25,0.25,19.61443
20,-0.50,-0.50,-0.50,0.03,-0.46,0.28,8.42964
21,0.16,0.25,0.00,0.32,-0.25,0.38,28.34642
22,-0.06,-0.25,-0.50,0.03,-0.31,-0.32,8.82148
23,-0.50,0.25,-0.25,0.03,0.03,-0.29,53.20864
24,0.21,0.50,0.00,0.12,-0.17,0.34,36.71494
25,0.31,0.50,0.25,0.34,-0.02,0.39,29.04886
26,-0.49,0.25,0.25,-0.22,-0.12,0.07,63.40224
27,-0.27,-0.50,0.00,0.35,0.29,0.34,65.43967
28,0.39,0.25,0.50,0.21,-0.03,0.38,25.73380
29,0.39,-0.25,0.00,0.30,0.13,0.28,3.46581
30,-0.45,0.50,0.50,0.06,-0.04,-0.21,59.91642
31,-0.00,0.50,-0.25,-0.36,0.05,-0.02,47.62934
32,-0.20,-0.25,-0.50,-0.03,0.16,0.42,21.80034
33,-0.14,0.25,0.50,-0.40,0.11,0.46,53.57877
34,0.11,0.00,-0.25,-0.48,-0.35,-0.21,39.38831
35,0.14,0.00,0.00,-0.37,0.15,0.02,38.41253
36,-0.09,-0.50,-0.50,-0.41,-0.47,-0.39,5.75857
37,-0.19,0.50,0.25,-0.08,0.44,-0.19,52.70103
38,0.42,-0.50,-0.25,-0.19,0.00,-0.01,2.18997
39,-0.47,0.50,-0.25,0.33,-0.33,0.35,51.42151
)";

}  // namespace

ExperimentTable load_fixture(const std::string& name) {
  if (name == "exp1") return table_from_csv(kExp1Csv);
  if (name == "exp2") return table_from_csv(kExp2Csv);
  if (name == "validation") return table_from_csv(kValidationCsv);
  fail(errkind::unknown_name,
       "unknown fixture '" + name + "' (expected exp1, exp2 or validation)");
}

}  // namespace pollerr
